"""
Classification des tuples à monodromie finie et tables associées.
"""

from .reference_tables import TABLE1, TABLE2, TABLE3, TABLE4, TableDiff, diff_table, table_members
from .schwarz_classifier import (
    Classification,
    DihedralFamily,
    DihedralWitness,
    EquivClass,
    QuadrupleEnumeration,
    SchwarzClass,
    SubtupleFactorization,
    TripleEnumeration,
    classify_n,
    enumerate_quadruples,
    enumerate_triples,
    equiv_class,
    exhaustive_classes,
    extend_winners,
    factor_primitive,
    is_dihedral_class,
    is_primitive,
    pair_sum_dihedral,
    schwarz_classes,
    schwarz_normal_form,
    shape_witness,
    subtuples,
)
from .table_emitter import (
    FORMATS,
    frame_to_markdown,
    render,
    table1_frame,
    table2_frame,
    table3_frame,
    table4_frame,
)
