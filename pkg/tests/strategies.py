from hypothesis import strategies as st

from components.numeric.scalar import GaussianRational, normalize

integers = st.integers(min_value=-10 ** 12, max_value=10 ** 12)
rationals = st.fractions(max_denominator=10 ** 6).map(normalize)
gaussians = st.builds(GaussianRational, st.fractions(max_denominator=1000), st.fractions(max_denominator=1000)).map(normalize)
scalars = st.one_of(integers, rationals, gaussians)
