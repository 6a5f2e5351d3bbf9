"""Exact Jones calculus for twisted birefringent plates, SAM x OAM states,
Pancharatnam phases and concurrence of cascaded QHQ elements."""

from .jones import (ALL_CONVENTIONS, DEFAULT_CONVENTION, Convention, GadgetSpec, Matrix2,
                    build_N, compose, plate_H, plate_Q, reflection_K, rotation_S, twist)
from .states import PolState, apply, inner, named_ket, oam_spectrum
from .symphase import DEFAULT_CONTEXT, Context, SymbolicScalar

__version__ = "0.1.0"
