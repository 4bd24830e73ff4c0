"""Exceptions and tagged result variants shared across the package."""

from __future__ import annotations

from dataclasses import dataclass, field


class MixsingError(Exception):
    """Base class. `module` names the layer that raised."""

    module = "mixsing"

    def payload(self) -> dict:
        return {"error": type(self).__name__, "module": self.module, "detail": str(self)}


class PrecisionExhausted(MixsingError):
    module = "coeff"


class RamifiedUnsupported(MixsingError):
    module = "coeff"


class UnramifiedUnsupported(MixsingError):
    module = "pderiv"


class ShapeMismatch(MixsingError):
    module = "series"


class OrderViolation(MixsingError):
    module = "series"


class OrderMismatch(MixsingError):
    module = "normform"


class PreconditionError(MixsingError):
    module = "invariants"


class CombinatorialBlowup(MixsingError):
    module = "localalg"


class NotFiniteUpToBounds(MixsingError):
    """Colength could not be certified finite within the configured bounds.

    This never means the colength is infinite.
    """

    module = "localalg"

    def __init__(self, msg: str, bounds: dict | None = None):
        super().__init__(msg)
        self.bounds = dict(bounds or {})

    def payload(self) -> dict:
        d = super().payload()
        d["bounds"] = self.bounds
        return d


class ParseError(MixsingError):
    module = "cli"

    def __init__(self, msg: str, offset: int | None = None):
        super().__init__(msg if offset is None else f"{msg} at offset {offset}")
        self.offset = offset

    def payload(self) -> dict:
        d = super().payload()
        d["offset"] = self.offset
        return d


class ExprSyntaxError(ParseError):
    pass


class UnknownVariable(ParseError):
    pass


class ExponentOverflow(ParseError):
    pass


@dataclass(frozen=True)
class ZeroAtPrecision:
    precision: int


@dataclass(frozen=True)
class NotASquare:
    residue: int
    p: int


@dataclass(frozen=True)
class NotFoundUpTo:
    bound: int
    exact: bool = False


@dataclass(frozen=True)
class AtLeast:
    k: int


@dataclass
class Events:
    """Collects precision events raised while a computation runs."""

    items: list = field(default_factory=list)

    def add(self, kind: str, **info) -> None:
        self.items.append({"event": kind, **info})
