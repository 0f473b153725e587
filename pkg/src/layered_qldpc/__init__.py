"""Layered message-passing decoding of quantum LDPC codes."""

from .codes import (
    CssCode,
    HgpRowLabel,
    build_c2,
    css_dimension,
    css_validate,
    get_code,
    hypergraph_product,
    load_b1,
    load_css,
)
from .decoder import (
    Decoder,
    DecoderConfig,
    DecodeResult,
    LcgState,
    check_update,
    decode,
    init_llr,
    lcg_next,
    sample_layer_order,
)
from .gf2 import (
    RowSpace,
    SparseBinaryMatrix,
    circulant,
    gf2_kernel,
    gf2_rank,
    identity,
    in_rowspace,
    mat_vec,
    read_alist,
    write_alist,
)
from .latency import LatencyQuery, latency
from .layering import (
    CoverReport,
    LayerCover,
    b1_cover,
    c2_component_layers,
    c2_layers,
    density_bound,
    greedy_decompose,
    hgp_layers,
    is_layer,
    read_cover,
    validate_cover,
    write_cover,
)
from .simulation import Outcome, SimStats, TrialRecord, classify, run_trials, sample_z_error

__version__ = "0.1.0"
