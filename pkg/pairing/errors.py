"""
Exceptions shared by every layer of the scheme.

Each exception carries the process exit code the command-line entry point
maps it to.
"""


class BioIBEError(Exception):
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidArgumentError(BioIBEError, ValueError):
    exit_code = 2


class InvalidConfigError(BioIBEError, ValueError):
    exit_code = 2


class RecordFormatError(BioIBEError, ValueError):
    exit_code = 2


class CryptographicRefusal(BioIBEError):
    exit_code = 3


class InsufficientOverlapError(CryptographicRefusal):
    def __init__(self, overlap: int, threshold: int):
        super().__init__(f"Attribute overlap {overlap} is below the threshold d={threshold}; "
                         f"decryption refused")
        self.overlap = overlap
        self.threshold = threshold


class InsufficientSharesError(CryptographicRefusal):
    def __init__(self, shares: int, threshold: int):
        super().__init__(f"Secret key holds {shares} shares but d={threshold} are needed")
        self.shares = shares
        self.threshold = threshold


class QueryRejectedError(BioIBEError):
    """Raised by the game challenger when a key query violates the overlap restriction."""
