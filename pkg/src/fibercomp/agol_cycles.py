"""Periodic splitting sequences for Anosov maps of the (one-holed) torus.

On the torus a measured train track carrying the expanding eigenline ``l`` of
a hyperbolic matrix ``M`` is a basis ``B`` (the two branches) together with
positive weights ``v`` with ``B v = l``. A maximal split subtracts the smaller
weight from the larger one, i.e. replaces ``B`` by ``B R`` or ``B L`` with
``R = [[1,1],[0,1]]`` and ``L = [[1,0],[1,1]]``. Bases are taken modulo the
track symmetries ``D = {+-I, +-J}``. The sequence becomes periodic:
``M B_m = B_{m+n} E`` with ``E`` in ``D`` and ``E v_m = +-lambda v_{m+n}``.

Square roots, commuting involutions, conjugators and centralizers are read
off by matching tracks in the cycle and then verified by exact matrix
arithmetic. Every probe made by the root solver is logged in
``PROBE_LOG`` so tests can check that only the admissible index was tried.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Literal

from .algebraic import AlgebraicNumber, QuadraticNumber
from .surface_kernel import MappingClass
from .torus import (
    I2,
    J_MAT,
    NEG_I,
    Mat,
    TorusLift,
    mat_det,
    mat_inv,
    mat_mul,
    mat_neg,
    mat_pow,
    mat_trace,
)

log = logging.getLogger(__name__)

__all__ = [
    "MeasuredTrainTrack",
    "AgolCycle",
    "NotPseudoAnosov",
    "stable_cycle",
    "square_roots",
    "commuting_involutions",
    "pa_conjugator",
    "pa_centralizer_generators",
    "matrix_cycle",
    "conjugacy_key",
    "PROBE_LOG",
]

R_SPLIT: Mat = (1, 1, 0, 1)
L_SPLIT: Mat = (1, 0, 1, 1)
D_GROUP: tuple[Mat, ...] = (I2, NEG_I, J_MAT, mat_neg(J_MAT))

PROBE_LOG: list[dict] = []


class NotPseudoAnosov(ValueError):
    pass


def _squarefree(n: int) -> tuple[int, int]:
    """``n = k*k*d`` with ``d`` squarefree; returns ``(k, d)``."""
    k, d = 1, n
    f = 2
    while f * f <= d:
        while d % (f * f) == 0:
            d //= f * f
            k *= f
        f += 1
    return k, d


@dataclass(frozen=True)
class MeasuredTrainTrack:
    basis: Mat
    weights: tuple[QuadraticNumber, QuadraticNumber]

    def __post_init__(self):
        if not all(w.sign() > 0 for w in self.weights):
            raise ValueError("train track weights must be positive")

    def branch_weights(self) -> tuple[QuadraticNumber, ...]:
        """Weights on the three branches; the switch condition is built in."""
        x, y = self.weights
        return (x, y, x + y)

    def split(self) -> tuple["MeasuredTrainTrack", str]:
        x, y = self.weights
        if x > y:
            return MeasuredTrainTrack(mat_mul(self.basis, R_SPLIT), (x - y, y)), "R"
        return MeasuredTrainTrack(mat_mul(self.basis, L_SPLIT), (x, y - x)), "L"

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis),
            "weights": [[str(w.a), str(w.b), w.d] for w in self.weights],
        }


@dataclass(frozen=True)
class AgolCycle:
    matrix: Mat
    tracks: tuple[MeasuredTrainTrack, ...]
    word: tuple[str, ...]
    twist: Mat  # E with M B_0 = B_n E
    sign: int  # M l = sign * lambda * l
    period: int
    scaling: AlgebraicNumber
    preperiod: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "matrix": list(self.matrix),
                "word": "".join(self.word),
                "twist": list(self.twist),
                "sign": self.sign,
                "period": self.period,
                "scaling": self.scaling.to_json(),
                "tracks": [t.to_json() for t in self.tracks],
            },
            sort_keys=True,
        )

    def check_identity(self) -> bool:
        """``M`` applied to track ``m`` is ``lambda`` times track ``m+n`` for one period."""
        trs = list(self.tracks)
        # walk one more period to compare index m with m+n
        ext = list(trs)
        cur = trs[-1]
        for _ in range(self.period):
            cur, _ = cur.split()
            ext.append(cur)
        lam = _field_lambda(self.matrix)
        for m in range(self.period):
            b_m, b_mn = ext[m], ext[m + self.period]
            e = mat_mul(mat_inv(b_mn.basis), mat_mul(self.matrix, b_m.basis))
            if e not in D_GROUP:
                return False
            pv = _perm_weights(e, b_m.weights)
            if pv != tuple(lam * w for w in b_mn.weights):
                return False
        return True


def _track_after(t: MeasuredTrainTrack, steps: int):
    out, word = [t], []
    for _ in range(steps):
        t, letter = t.split()
        out.append(t)
        word.append(letter)
    return out, word


def _perm_weights(e: Mat, w):
    """Weights of the track ``B E`` pulled back: permutation part of ``E``."""
    if e in (J_MAT, mat_neg(J_MAT)):
        return (w[1], w[0])
    return tuple(w)


def _is_hyperbolic(m: Mat) -> bool:
    return abs(mat_trace(m)) > 2 if mat_det(m) == 1 else False


def _field_lambda(m: Mat) -> QuadraticNumber:
    t = abs(mat_trace(m))
    disc = t * t - 4 * mat_det(m)
    k, d = _squarefree(disc)
    return QuadraticNumber.of(Fraction(t, 2), Fraction(k, 2), d)


def _dilatation(m: Mat) -> AlgebraicNumber:
    t = abs(mat_trace(m))
    det = mat_det(m)
    return AlgebraicNumber.largest_real_root([1, -t, det])


def _eigenline(m: Mat) -> tuple[QuadraticNumber, QuadraticNumber, int]:
    lam = _field_lambda(m)
    sign = 1 if mat_trace(m) > 0 else -1
    mu = lam * sign
    a, b, c, d = m
    if b != 0:
        return QuadraticNumber.of(b, 0, lam.d), mu - a, sign
    return mu - d, QuadraticNumber.of(c, 0, lam.d), sign


def _matrix_of(f) -> Mat:
    if isinstance(f, MappingClass):
        if len(f.domain.blocks) != 1 or not f.domain.blocks[0].is_torus:
            raise NotPseudoAnosov("cycle code handles single torus blocks")
        return f.elems[0].L
    if isinstance(f, TorusLift):
        return f.L
    return tuple(f)  # type: ignore[return-value]


def matrix_cycle(m: Mat, max_steps: int = 10_000) -> AgolCycle:
    """Periodic splitting sequence of a hyperbolic matrix with det 1 (or det -1 Anosov)."""
    det = mat_det(m)
    tr = mat_trace(m)
    if not ((det == 1 and abs(tr) > 2) or (det == -1 and tr != 0)):
        raise NotPseudoAnosov(f"matrix {m} is not Anosov")
    lam = _field_lambda(m)
    lx, ly, sign = _eigenline(m)
    if det == -1:
        # eigenvalue of modulus > 1 may be negative; fix its sign explicitly
        t = QuadraticNumber.of(tr, 0, lam.d)
        sign = 1 if (t * t).sign() >= 0 and t.sign() > 0 else -1
        lx, ly = _eigvec(m, lam * sign)
    s1 = 1 if lx.sign() > 0 else -1
    s2 = 1 if ly.sign() > 0 else -1
    b0: Mat = (s1, 0, 0, s2)
    weights = (lx * s1, ly * s2)
    if mat_det(b0) == -1:
        b0 = mat_mul(b0, J_MAT)
        weights = (weights[1], weights[0])
    tracks = [MeasuredTrainTrack(b0, weights)]
    word: list[str] = []
    for j in range(1, max_steps):
        t, letter = tracks[-1].split()
        tracks.append(t)
        word.append(letter)
        bj_inv = mat_inv(t.basis)
        for mm in range(j):
            e = mat_mul(bj_inv, mat_mul(m, tracks[mm].basis))
            if e not in D_GROUP:
                continue
            if _perm_weights(e, tracks[mm].weights) == tuple(lam * w for w in t.weights):
                return _normalize_cycle(m, tracks[mm:j], word[mm:j], e, sign, lam, mm)
    raise RuntimeError("splitting sequence did not become periodic")


def _eigvec(m: Mat, mu: QuadraticNumber):
    a, b, c, d = m
    if b != 0:
        return QuadraticNumber.of(b, 0, mu.d), mu - a
    return mu - d, QuadraticNumber.of(c, 0, mu.d)


def _normalize_cycle(m, tracks, word, e, sign, lam, pre) -> AgolCycle:
    n = len(word)
    # index 0: lexicographically minimal rotation of the split word
    best = min(range(n), key=lambda i: (tuple(word[i:] + word[:i]), i))
    rot_tracks = tracks[best:] + [None] * 0
    if best:
        extra = []
        cur = tracks[-1]
        for _ in range(best):
            cur, _ = cur.split()
            extra.append(cur)
        rot_tracks = tracks[best:] + extra[: best]
        # the appended tracks come after index n-1; keep exactly n tracks
        rot_tracks = rot_tracks[:n]
    rot_word = word[best:] + word[:best]
    t0 = rot_tracks[0]
    e0 = mat_mul(mat_inv(_split_path(t0, n).basis), mat_mul(m, t0.basis))
    smallest = min(t0.weights)
    normed = tuple(MeasuredTrainTrack(t.basis, tuple(w / smallest for w in t.weights)) for t in rot_tracks)
    dil = AlgebraicNumber.largest_real_root([1, -abs(mat_trace(m)), mat_det(m)])
    return AgolCycle(m, normed, tuple(rot_word), e0, sign, n, dil, pre + best)


def _split_path(t: MeasuredTrainTrack, steps: int) -> MeasuredTrainTrack:
    for _ in range(steps):
        t, _ = t.split()
    return t


def stable_cycle(f) -> AgolCycle:
    """The normalized Agol cycle of a pseudo-Anosov class on a torus block."""
    return matrix_cycle(_matrix_of(f))


def _rotate_twisted(word: tuple[str, ...], twist: Mat, k: int) -> tuple[str, ...]:
    swap = twist in (J_MAT, mat_neg(J_MAT))
    w = list(word)
    for _ in range(k):
        first = w.pop(0)
        w.append({"R": "L", "L": "R"}[first] if swap else first)
    return tuple(w)


def conjugacy_key(m: Mat) -> tuple:
    """Complete invariant of the GL(2,Z) class under conjugation by SL(2,Z)."""
    det = mat_det(m)
    if det == 1 and abs(mat_trace(m)) > 2 or det == -1 and mat_trace(m) != 0:
        cyc = matrix_cycle(m)
        sign = 1 if mat_trace(m) > 0 else -1
        rots = [_rotate_twisted(cyc.word, cyc.twist, k) for k in range(cyc.period)]
        return ("anosov", det, sign, min(rots), cyc.twist in (J_MAT, mat_neg(J_MAT)))
    return ("matrix-class", det, mat_trace(m), _small_class_rep(m))


def _small_class_rep(m: Mat) -> Mat:
    """Minimal representative of the SL(2,Z) conjugacy class for elliptic/parabolic/det -1 small matrices.

    Search over conjugators with small entries; parabolic classes are
    normalized to ``+-[[1,n],[0,1]]``.
    """
    det, tr = mat_det(m), mat_trace(m)
    if det == 1 and abs(tr) == 2:
        if m in (I2, NEG_I):
            return m
        s = 1 if tr > 0 else -1
        a, b, c, d = m
        # m - s*I has rank one with image spanned by a primitive vector (p, q)
        from math import gcd

        p, q = (a - s, c) if (a - s, c) != (0, 0) else (b, d - s)
        g = gcd(p, q)
        p, q = p // g, q // g
        # complete (p, q) to an SL2 basis and read the twist amount
        x, y = _bezout(p, q)
        g_mat = (p, -y, q, x)
        conj = mat_mul(mat_inv(g_mat), mat_mul(m, g_mat))
        return conj
    best = None
    rng = range(-3, 4)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    g = (a, b, c, d)
                    if mat_det(g) != 1:
                        continue
                    cand = mat_mul(mat_inv(g), mat_mul(m, g))
                    if best is None or cand < best:
                        best = cand
    return best


def _bezout(p: int, q: int) -> tuple[int, int]:
    """``x, y`` with ``p*x + q*y = 1``."""
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


# ---------------------------------------------------------------------------
# solving on the cycle


def _ext_tracks(cyc: AgolCycle, count: int) -> list[MeasuredTrainTrack]:
    out = list(cyc.tracks)
    cur = out[-1]
    while len(out) < count:
        cur, _ = cur.split()
        out.append(cur)
    return out


def _ratio(u, v) -> QuadraticNumber | None:
    r0 = u[0] / v[0]
    r1 = u[1] / v[1]
    return r0 if r0 == r1 else None


def _wrap(f, mat: Mat, w: int = 0):
    if isinstance(f, MappingClass):
        return MappingClass(f.domain, f.perm, (TorusLift(mat, w),))
    return mat


def _lift_for_root(f, a: Mat) -> int:
    """Choose the winding of a preserving root so that its square matches ``f`` rel boundary when possible."""
    if not isinstance(f, MappingClass) or mat_det(a) != 1:
        return 0
    target = f.elems[0]
    for w in range(-4, 5):
        cand = TorusLift(a, w)
        if cand.compose(cand) == target:
            return w
    return 0


def square_roots(f) -> list:
    """All classes ``a`` (either orientation) with ``a**2 = f`` as free classes."""
    m = _matrix_of(f)
    cyc = matrix_cycle(m)
    n = cyc.period
    if n % 2:
        PROBE_LOG.append({"op": "square_roots", "period": n, "probed": None})
        return []
    k = n // 2
    tracks = _ext_tracks(cyc, n + 1)
    t0, tk = tracks[0], tracks[k]
    lam = _field_lambda(m)
    roots: list[Mat] = []
    for e in D_GROUP:
        r = _ratio(_perm_weights(e, t0.weights), tk.weights)
        PROBE_LOG.append({"op": "square_roots", "period": n, "index": k, "E": e, "ratio": repr(r)})
        if r is None or r * r != lam:
            continue
        a = mat_mul(tk.basis, mat_mul(e, mat_inv(t0.basis)))
        for cand in (a, mat_neg(a)):
            if mat_mul(cand, cand) == m and cand not in roots:
                roots.append(cand)
    roots.sort()
    return [_wrap(f, a, _lift_for_root(f, a)) for a in roots]


def commuting_involutions(f) -> list:
    """Involutions commuting with ``f``: solutions of ``iota_*(tau_0, mu_0) = (tau_0, mu_0)``."""
    m = _matrix_of(f)
    cyc = matrix_cycle(m)
    t0 = cyc.tracks[0]
    out: list[Mat] = []
    for e in D_GROUP:
        if _perm_weights(e, t0.weights) != tuple(t0.weights):
            continue
        iota = mat_mul(t0.basis, mat_mul(e, mat_inv(t0.basis)))
        if mat_mul(iota, iota) == I2 and mat_mul(iota, m) == mat_mul(m, iota) and iota not in out:
            out.append(iota)
    out.sort()
    return [_wrap(f, i) for i in out]


def pa_conjugator(f, g, orientation: Literal["preserve", "reverse"] = "preserve", boundary_map=None):
    """Some ``h`` with ``h f h^-1 = g`` of the requested orientation, or ``None``.

    One-holed torus blocks have a single boundary circle, so ``boundary_map``
    is forced; it is accepted for interface compatibility.
    """
    mf, mg = _matrix_of(f), _matrix_of(g)
    if mat_trace(mf) != mat_trace(mg) or mat_det(mf) != mat_det(mg):
        return None
    cf, cg = matrix_cycle(mf), matrix_cycle(mg)
    want_det = 1 if orientation == "preserve" else -1
    tf = _ext_tracks(cf, cf.period)
    tg = _ext_tracks(cg, cg.period)
    for b_m in tf:
        for b_j in tg:
            for e in D_GROUP:
                if _ratio(_perm_weights(e, b_m.weights), b_j.weights) is None:
                    continue
                h = mat_mul(b_j.basis, mat_mul(e, mat_inv(b_m.basis)))
                if mat_det(h) != want_det:
                    continue
                if mat_mul(h, mat_mul(mf, mat_inv(h))) == mg:
                    return _wrap_conj(f, g, h)
    return None


def _wrap_conj(f, g, h: Mat):
    if not isinstance(f, MappingClass):
        return h
    return MappingClass(f.domain, f.perm, (TorusLift(h, 0),))


def pa_centralizer_generators(f) -> list:
    """A root of minimal power of ``f`` together with the symmetry group of the cycle."""
    m = _matrix_of(f)
    cyc = matrix_cycle(m)
    n = cyc.period
    tracks = _ext_tracks(cyc, n + 1)
    t0 = tracks[0]
    gens: list[Mat] = []
    for s in range(0, n + 1):
        found = []
        for e in D_GROUP:
            if _ratio(_perm_weights(e, t0.weights), tracks[s].weights) is None:
                continue
            c = mat_mul(tracks[s].basis, mat_mul(e, mat_inv(t0.basis)))
            if mat_mul(c, m) == mat_mul(m, c):
                found.append(c)
        if s == 0:
            gens.extend(x for x in found if x != I2)
        elif found:
            gens.append(min(found))
            break
    gens = sorted(set(gens))
    return [_wrap(f, c) for c in gens]


def centralizer_contains(gens: list[Mat], target: Mat, bound: int = 12) -> bool:
    """Search small words in the generators (and inverses) for ``target``."""
    frontier = {I2}
    seen = {I2}
    allg = list(gens) + [mat_inv(g) for g in gens]
    for _ in range(bound):
        nxt = set()
        for x in frontier:
            for g in allg:
                y = mat_mul(x, g)
                if y == target:
                    return True
                if y not in seen and max(abs(v) for v in y) < 10**6:
                    seen.add(y)
                    nxt.add(y)
        frontier = nxt
    return target == I2


def matrix_power_root(m: Mat, k: int) -> list[Mat]:
    """Brute-force check helper: matrices ``a`` with small entries and ``a**k = m``."""
    out = []
    rng = range(-6, 7)
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    x = (a, b, c, d)
                    if abs(mat_det(x)) == 1 and mat_pow(x, k) == m:
                        out.append(x)
    return out
