"""Exact primal and dual shattering dimensions of finite function classes."""

from .constructions import (
    BlockSpec,
    MergeFamily,
    make_b_d,
    make_block_matrix,
    make_lemma_5_3,
    make_lemma_5_4,
    merge,
)
from .dimensions import (
    PsiFamily,
    Witness,
    dimension,
    dual_dimension,
    psi_dimension,
    verify_witness,
)
from .errors import (
    BudgetExceeded,
    LabelError,
    MalformedWitness,
    MatrixError,
    ParseError,
    ShatterError,
    SizeLimitError,
    SpecError,
)
from .matrix import (
    Domain,
    RationalMatrix,
    ThresholdAssignment,
    TriBoolMatrix,
    augment_zero_row,
    restrict,
    threshold,
    transpose,
)
from .shattering import (
    Kind,
    ShatterSpec,
    candidate_thresholds,
    is_shattered,
    is_vc_shattered,
    realized_patterns,
)

__version__ = "0.1.0"
