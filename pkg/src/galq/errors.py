"""Exception types shared across the package."""


class GalqError(Exception):
    pass


class ConductorMismatch(GalqError):
    pass


class InvalidAutomorphism(GalqError):
    pass


class InvalidBase(GalqError):
    """Raised when a path-integral base g does not satisfy g**n == +-1."""


class NoUniqueStep(GalqError):
    """The discrete equation of motion does not fix q(t+1) uniquely mod n."""


class NonConvergence(GalqError):
    def __init__(self, message, iterations=None):
        super().__init__(message)
        self.iterations = iterations


class NotPrime(GalqError):
    pass


class NotCoprime(GalqError):
    pass


class ConfigError(GalqError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
