"""Exception hierarchy shared by the library and the command line."""


class PolarcartError(Exception):
    """Base class for all errors raised by polarcart."""


class FieldError(PolarcartError, ValueError):
    """Invalid field construction or mixed-field arithmetic."""


class DimensionError(PolarcartError, ValueError):
    """Matrix or vector shapes are incompatible."""


class BoxError(PolarcartError, ValueError):
    """A monomial lies outside its exponent box, or boxes disagree."""


class NotDecreasingError(PolarcartError, ValueError):
    """An operation that needs a decreasing monomial set got another one."""


class GuardError(PolarcartError, RuntimeError):
    """An exhaustive search would exceed its hard size limit."""


class ConfigError(PolarcartError, ValueError):
    """A job configuration is malformed or inconsistent."""


class CertificateError(PolarcartError, RuntimeError):
    """A structural certificate failed to verify."""
