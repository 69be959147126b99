"""Hypothesis strategies for random homogeneous polynomials over the toy table."""

from hypothesis import strategies as st

from verification.algebra import GradedPoly, mul
from verification.properties import MAX_DEGREE, PolynomialSampler, toy_structure

TOY = toy_structure()
TABLE = TOY.table
_POOLS = PolynomialSampler(TOY, seed=0, max_degree=MAX_DEGREE)

coefficients = st.integers(min_value=-3, max_value=3).filter(lambda c: c != 0)
ghosts = st.integers(min_value=-2, max_value=1)


def _build(exponent_rows, coefs) -> GradedPoly:
    variables = list(TABLE)
    result = GradedPoly.zero(TABLE)
    for exps, coef in zip(exponent_rows, coefs):
        term = GradedPoly.constant(TABLE, coef)
        for exponent, var in zip(exps, variables):
            if exponent:
                term = mul(term, TABLE.poly(var.name) ** exponent)
        result = result + term
    return result


@st.composite
def homogeneous(draw, ghost=None, laplace_free=False, max_terms=3):
    """A polynomial whose terms all have the same ghost number; returns (poly, ghost)."""
    g = draw(ghosts) if ghost is None else ghost
    pool = _POOLS.exponents(g, laplace_free)
    if not pool:
        return GradedPoly.zero(TABLE), g
    picks = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=max_terms, unique=True))
    coefs = draw(st.lists(coefficients, min_size=len(picks), max_size=len(picks)))
    return _build(picks, coefs), g
