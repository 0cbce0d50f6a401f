from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(lo=-9, hi=9, max_den=6):
    return st.builds(Fraction, st.integers(lo, hi), st.integers(1, max_den))


def nonzero_rationals(lo=-9, hi=9, max_den=6):
    return rationals(lo, hi, max_den).filter(bool)


def laurent_dicts(lo=-3, hi=3, max_terms=4):
    """Sparse exponent -> coefficient maps for exact Laurent polynomials."""
    return st.dictionaries(st.integers(lo, hi), nonzero_rationals(), max_size=max_terms)
