from src.groups.monodromy_group import (
    DEFAULT_CAP,
    CycloMatrix2,
    ClosureResult,
    PairSumFractions,
    DihedralTraceResult,
    gassner_generators_n2,
    preserves_form,
    group_closure,
    dihedral_trace_test,
    pgl2_orders,
    projective_order,
    determinant_order,
    sample_form_invariance,
)
