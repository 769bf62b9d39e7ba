"""Hypothesis strategies for fields and small operators."""

from hypothesis import strategies as st

from superspin.expressions import ANTI, BETA, HOL, PSI, FieldSymbol, Monomial, OperatorExpr

INDEX_NAMES = ["i", "j", "k"]


def field_symbols(indices=st.sampled_from(INDEX_NAMES + [1, 2]), chirality=st.sampled_from([HOL, ANTI]), max_deriv=1):
    return st.builds(
        FieldSymbol,
        chirality,
        st.sampled_from([PSI, BETA]),
        st.sampled_from([1, -1]),
        st.integers(0, max_deriv),
        indices,
    )


@st.composite
def well_formed_fields(draw, min_size=1, max_size=4, **kw):
    """A field list in which no abstract index occurs more than twice."""
    fields = draw(st.lists(field_symbols(**kw), min_size=min_size, max_size=max_size))
    seen = {}
    out = []
    for f in fields:
        if isinstance(f.index, str):
            seen[f.index] = seen.get(f.index, 0) + 1
            if seen[f.index] > 2:
                continue
        out.append(f)
    return out


@st.composite
def homogeneous_operators(draw, max_terms=2, max_size=3, chirality=st.sampled_from([HOL, ANTI])):
    """Small operators of definite Grassmann parity with concrete indices."""
    parity = draw(st.integers(0, 1))
    terms = []
    for _ in range(draw(st.integers(1, max_terms))):
        fields = draw(
            st.lists(field_symbols(indices=st.sampled_from([1, 2]), chirality=chirality), min_size=1, max_size=max_size)
        )
        if sum(f.species == PSI for f in fields) % 2 != parity:
            fields.append(FieldSymbol(fields[0].chirality, PSI, 1, 0, 2))
        terms.append((Monomial(tuple(fields)), draw(st.integers(-3, 3).filter(bool))))
    return OperatorExpr(terms)
