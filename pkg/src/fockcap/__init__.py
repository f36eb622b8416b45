"""Fock-state capability of imperfect single-photon sources.

``n`` photon-number statistics are bunched into one mode of a balanced
linear-optics network; the source has the capability of ``|n>`` when the
resulting Wigner function keeps the negative-region structure of the ideal
Fock state ``|n>``.
"""
from .bunching import (
    BunchingResult,
    bunching_weight,
    merge,
    merge_bruteforce,
    merge_convolution,
)
from .capability import (
    CapabilityReport,
    DataSet,
    averaged_merge,
    capability,
    capability_simplified,
    loss_depth_sweep,
    partition_dataset,
)
from .reference import TABLE_I, jittered_runs, row_distribution
from .stats import (
    PhotonNumberDistribution,
    SourceSummary,
    apply_loss,
    fock,
    g2_zero,
    mean_photon_number,
    normalize,
    origin_negativity,
    summarize,
    truncate_multiphoton,
)
from .tomography import (
    QuadratureDataset,
    fock_quadrature_likelihood,
    heralded_source_model,
    reconstruct_em,
    synthesize_quadratures,
)
from .wigner import (
    NegativeRegionStructure,
    RadialWignerPolynomial,
    capability_test,
    fit_attenuated_fock,
    ideal_region_count,
    negative_regions,
    radial_wigner,
    wigner_cut,
)

__version__ = "0.1.0"
