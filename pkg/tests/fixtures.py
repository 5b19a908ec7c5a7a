"""Shared builders for the test suites."""

from bioibe import AttributeSet, SchemeConfig, setup


def overlapping_set(group, w: AttributeSet, overlap: int, rng) -> AttributeSet:
    """A set of |w| attributes sharing exactly `overlap` of them with w."""
    shared = rng.sample(list(w), overlap)
    if overlap == len(w):
        return AttributeSet(tuple(shared))
    fresh = AttributeSet.random(group, len(w) - overlap, rng, exclude=w.attrs)
    return AttributeSet(tuple(shared) + fresh.attrs)


def make_system(group, rng, n: int = 8, d: int = 4, **options):
    config = SchemeConfig(group=group, n=n, d=d, **options)
    pp, msk = setup(rng, config)
    return config, pp, msk
