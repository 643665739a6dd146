from src.arith.residues import (
    ResidueTuple,
    UnitGroup,
    units,
    check_unit,
    frac_part,
    fractional,
    integer_part,
    orbit,
    orbit_multiset,
    canonical_rep,
    fraction_to_str,
    fraction_from_str,
    residue_table,
    primitive_mask,
    sorted_tuples,
)
