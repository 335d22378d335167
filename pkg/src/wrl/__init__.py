"""Exact Waring ranks of real symmetric forms and typical-rank censuses."""

from .binaryforms import (
    BinaryForm,
    Decomposition,
    RankCertificate,
    border_rank_binary,
    catalecticant_binary,
    complex_rank_binary,
    decompose_binary,
    real_rank_binary,
    verify_decomposition,
    witness_rank_d,
)
from .census import CensusRecord, CensusSpec, run_census, verify_theorem, write_results
from .exactmath import GaussianRational, Rational, UniPoly, rat_kernel, rat_rank, sturm_distinct_real_roots
from .rankcert import MultiRankCertificate, certified_rank_multi, split_along_pairs, verify_reconstruction
from .veronese import (
    PointConfiguration,
    ProjectivePoint,
    SymmetricForm,
    sample_configuration,
    sample_in_span,
    veronese_embed,
)

__version__ = "0.1.0"
