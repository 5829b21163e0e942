"""Shared primitive types: identifier wrappers, senses, variable domains."""

from __future__ import annotations

import enum

INF = float("inf")


class VarId(int):
    """Handle for a first-stage decision variable."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"VarId({int(self)})"


class UncId(int):
    """Handle for a single uncertain-parameter component."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"UncId({int(self)})"


class AdjId(int):
    """Handle for an adjustable (second-stage) variable."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"AdjId({int(self)})"


class Sense(enum.Enum):
    """Constraint sense."""

    LE = "<="
    GE = ">="
    EQ = "=="

    @classmethod
    def parse(cls, text: str) -> "Sense":
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(f"unknown constraint sense {text!r}")


class ObjSense(enum.Enum):
    """Optimization direction."""

    MIN = "min"
    MAX = "max"

    @classmethod
    def parse(cls, text: str) -> "ObjSense":
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(f"unknown objective sense {text!r}")
