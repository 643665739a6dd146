from src.cyclotomic.cyclotomic_field import (
    CycloPoly,
    CycloElem,
    cyclotomic_poly,
    root_power,
    arith,
    galois,
    embed,
)
