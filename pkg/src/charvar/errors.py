"""Exception types raised by validation in this package."""

from __future__ import annotations


class NotTraceless(ValueError):
    """A meridian image is not traceless (pure)."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(f"meridian {index} is not traceless: re = {value:.3e}")


class ProductNotIdentity(ValueError):
    """The ordered meridian product is not the identity."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"meridian product differs from 1 by {residual:.3e}")


class RelationViolated(ValueError):
    """Surface generators do not satisfy [r1,s1][r2,s2] = 1."""

    def __init__(self, residual: float):
        self.residual = residual
        super().__init__(f"surface relation residual {residual:.3e}")


class ConstraintViolated(ValueError):
    """A point handed to an on-variety operation is off the variety."""


class NotBinaryDihedral(ValueError):
    """Operation requires a representation in the binary dihedral locus."""


class AbelianInput(ValueError):
    """Operation is undefined on the abelian locus."""
