"""Exact exterior calculus over C^2 minus the origin."""

from .coeff import (
    I,
    LNTAU,
    ONE,
    PI,
    R2,
    Z1,
    Z2,
    ZB1,
    ZB2,
    ZERO,
    CoeffExpr,
    DenominatorError,
    GaussQ,
    const,
    sym,
)
from .forms import (
    CoordForm,
    GenSection,
    GradeError,
    VField,
    coord_vector,
    courant,
    dz,
    ext_d,
    function_form,
    interior,
    lie_bracket,
    lie_derivative,
    pairing,
    wedge,
)
from .frames import (
    ALPHA1,
    ALPHA2,
    BETA1,
    BETA2,
    X1,
    X2,
    Y1,
    Y2,
    FrameForm,
    bidegree,
    bidegree_part,
    dbar,
    dc,
    frame_coforms,
    frame_vectors,
    partial,
    to_coord,
    to_frame,
)

__all__ = [name for name in dir() if not name.startswith("_")]
