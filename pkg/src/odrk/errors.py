"""Exception hierarchy shared by every odrk module."""


class OdrkError(Exception):
    """Base class for all toolkit errors."""


class DomainError(OdrkError):
    """Errors caused by the request itself (bad input, missing things)."""


class EmptyQuery(DomainError):
    pass


class InvalidHandle(DomainError):
    pass


class NotFound(DomainError):
    pass


class NoSuchFile(DomainError):
    pass


class NoRepositories(DomainError):
    pass


class Unreachable(OdrkError):
    """Transport-level failure talking to a repository."""


class ProtocolError(OdrkError):
    """The repository answered with something that is not the wire contract."""


class RangeUnsupported(OdrkError):
    """Server ignored a byte-range request and client-side fallback is off."""


class IoFailure(OdrkError):
    pass


class UnsupportedPair(DomainError):
    def __init__(self, provider: str, source: str, target: str):
        super().__init__(f"{provider} cannot translate {source!r} -> {target!r}")
        self.provider = provider
        self.source = source
        self.target = target


class ParseError(DomainError):
    pass


class EncodingError(ParseError):
    pass


class RaggedRow(ParseError):
    def __init__(self, record_number: int, expected: int, got: int):
        super().__init__(
            f"record {record_number} has {got} cells, header has {expected}"
        )
        self.record_number = record_number
        self.expected = expected
        self.got = got


class EmptyInput(ParseError):
    pass


class DuplicateHeader(DomainError):
    pass


class NotTabular(DomainError):
    pass


class EmptyLog(DomainError):
    pass


class NonPositiveTime(DomainError):
    pass


class MalformedResponse(DomainError):
    pass


class BindFailure(OdrkError):
    pass
