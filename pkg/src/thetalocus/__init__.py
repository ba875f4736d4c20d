"""Theta functions with half-integer characteristics and the incidence
structure of the genus-3 hyperelliptic locus in Siegel space."""

from .charalg import (
    EVEN,
    ODD,
    Characteristic,
    direct_sum,
    enumerate_characteristics,
    parity,
    split,
)
from .siegel import (
    BlockShape,
    PeriodMatrix,
    SymplecticMatrix,
    act,
    block_sum,
    generators,
    is_member,
    random_word,
    sample_generic,
)
from .thetanum import (
    JetAtZero,
    ThetaValue,
    TruncationError,
    eval_theta,
    eval_thetanull,
    heat_residual,
    jet_at_zero,
    shift_multiplier_check,
    shift_ratio_check,
    vanishing_order_at_zero,
)

__version__ = "0.1.0"
