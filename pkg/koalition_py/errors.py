"""Exceptions raised by the koalition_py package.

Every exception carries a stable machine readable ``code`` and the process
``exit_code`` the command line front end uses when it is not caught.

.. platform:: Unix, Windows, Mac
"""


class KoalitionError(Exception):
    """Base class of every error raised on purpose by koalition_py."""

    code = "error"
    exit_code = 2

    def __init__(self, message, code=None, path=None, line=None):
        super().__init__(message)
        self.message = message
        if code is not None:
            self.code = code
        self.path = path
        self.line = line

    def to_dict(self):
        """Return the error as a JSON ready dictionary.

        :return: Dictionary with ``error``, ``message`` and ``exit_code`` keys
            (plus ``path`` and ``line`` when known).
        :rtype: :py:class:`dict`
        """
        body = {
            "error": self.code,
            "message": self.message,
            "exit_code": self.exit_code,
        }
        if self.path is not None:
            body["path"] = str(self.path)
        if self.line is not None:
            body["line"] = self.line
        return body


class UsageError(KoalitionError):
    code = "usage"
    exit_code = 1


class DataError(KoalitionError):
    code = "data"
    exit_code = 2


class PollValidationError(DataError):
    """A poll breaks one or more invariants.

    ``errors`` holds every violated invariant, not only the first one.
    """

    code = "invalid-poll"

    def __init__(self, errors, message=None, path=None, line=None):
        self.errors = list(errors)
        if message is None:
            message = "invalid poll: " + ", ".join(self.errors)
        super().__init__(message, path=path, line=line)

    def to_dict(self):
        body = super().to_dict()
        body["errors"] = list(self.errors)
        return body


class PoolingError(DataError):
    code = "no-polls"


class ConfigError(KoalitionError):
    code = "config"
    exit_code = 3


class ModelError(KoalitionError):
    code = "model"
    exit_code = 2


class InsufficientDrawsError(ModelError):
    code = "insufficient-draws"
    exit_code = 1
