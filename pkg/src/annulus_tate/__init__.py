"""Annular Khovanov homology of 2-periodic links over F2.

Computes triply-graded AKh/Kh ranks of annular braid closures, builds the
Tate bicomplex of a 2-periodic double cover, runs both of its spectral
sequences by filtered cancellation, and machine-checks the periodicity
rank inequalities and their decategorified congruences.
"""

from .links import (
    AnnularDiagram,
    BraidError,
    BraidWord,
    CoverPairing,
    DiagramTooLarge,
    close_braid,
    double_cover,
    mirror,
    parse_braid_word,
)
from .cube import (
    Circle,
    EdgeType,
    Generator,
    Resolution,
    classify_edge,
    enumerate_generators,
    gradings,
    resolve,
)
from .f2algebra import (
    FilteredComplex,
    PageTable,
    dense_rank,
    homology_ranks,
    spectral_pages,
)
from .khovanov import (
    GradedComplex,
    Theory,
    build_complex,
    homology,
    homology_of,
    k_filtration_pages,
    total_rank,
)
from .tate import (
    EquivarianceReport,
    PeriodicRun,
    TateBicomplex,
    Verdict,
    build_tate,
    check_equivariance,
    hv_pages,
    tau_sharp,
    tau_table,
    total_diagonal_ranks,
    verify_cascade,
    verify_collapse,
    verify_diagonals,
    verify_e2_correspondence,
    verify_khtate_limit,
    verify_rank_inequality,
    vh_pages,
)
from .decat import (
    CongruenceReport,
    LaurentPoly,
    check_congruences,
    homology_poly,
    state_sum,
)

__version__ = "0.1.0"
