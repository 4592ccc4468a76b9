from .criteria import (
    BoundaryReport,
    CombinationReport,
    CompactnessReport,
    HinfReport,
    PairCheckReport,
    StructuralReport,
    SubsetSumResult,
    combination_compactness,
    combine_routes,
    difference_compactness,
    nonzero_sum_pair_check,
    path_verdict,
    single_compactness_bloch,
    single_compactness_hinf,
    structural_verdict,
    subset_sum_check,
)
from .delta import (
    DeltaSample,
    IndexSets,
    PathConditionsReport,
    cluster_sharp_residuals,
    default_paths,
    index_sets,
    path_conditions,
    sample_delta,
    sample_path,
    sharp_lambda_sums,
    star_lambda_sums,
)
from .sequence import (
    Params,
    SequenceDiagnostics,
    SequenceFit,
    Verdict,
    classify_sequence,
    fit_decay,
    power_sequence,
    power_sequence_p,
)

__all__ = [name for name in dir() if not name.startswith("_")]
