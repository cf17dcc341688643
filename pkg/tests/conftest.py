import sys
from pathlib import Path

from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fibercomp.torus import TorusLift  # noqa: E402

GENS = {
    "a": TorusLift.twist_a(),
    "b": TorusLift.twist_b(),
    "d": TorusLift.boundary_twist(),
}

EXPONENTS = st.sampled_from([-3, -2, -1, 1, 2, 3])
letters = st.tuples(st.sampled_from("abd"), EXPONENTS)
twist_words = st.lists(letters, max_size=6)
twist_words_ab = st.lists(st.tuples(st.sampled_from("ab"), EXPONENTS), min_size=1, max_size=6)


def lift_of(word) -> TorusLift:
    out = TorusLift.identity()
    for g, k in word:
        out = out.compose(GENS[g].power(k))
    return out


def text_of(word, suffix: str = "") -> str:
    return " ".join(f"T{g}{suffix}^{k}" for g, k in word)
