"""Gabriel–Zisman localizations computed on finite data.

Functors are tables: an object map, a morphism map and the equality and
invertibility tests of the target.  Localized hom-sets are spaces of right
fractions whose equality is decided after transport to a concrete model
(the heart), with the Ore moves themselves exercised as property tests.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .addcat import (
    QuotientCategory,
    _subfunctor_basis,
    col,
    ideal_vectors,
    is_isomorphism,
    isomorphic,
)
from .cotorsion import HypothesisError, check_result
from .exactlin import Mat, inverse, rank


# ---------------------------------------------------------------------------
# functors as tables


@dataclass
class Functor:
    name: str
    obj: Callable
    mor: Callable
    equal: Callable
    is_iso: Callable
    is_zero_obj: Callable | None = None


def hom_functor(cat, T, name: str = "Hom(T,-)") -> Functor:
    """``Hom(T, −)`` with values in matrices; works over quotient categories too."""
    F = cat.field

    def mor(f):
        Hs, Ht = cat.hom(T, f.source), cat.hom(T, f.target)
        return Mat.from_columns([Ht.coords(f @ b) for b in Hs.basis], Ht.dim, F)

    def iso(m):
        return m.nrows == m.ncols and rank(m) == m.nrows

    return Functor(name, lambda X: cat.hom(T, X).dim, mor, lambda a, b: a == b, iso,
                   lambda X: cat.hom(T, X).dim == 0)


def category_functor(name: str, target, obj: Callable, mor: Callable) -> Functor:
    """A functor into a backend-like ``target`` (equality through its hom spaces)."""

    def eq(a, b):
        H = target.hom(a.source, a.target)
        return H.coords(a) == H.coords(b)

    return Functor(name, obj, mor, eq, lambda m: is_isomorphism(target, m) is not None,
                   lambda X: target.hom(X, X).dim == 0)


def compose_functors(G: Functor, F: Functor) -> Functor:
    return Functor(f"{G.name}∘{F.name}", lambda X: G.obj(F.obj(X)), lambda f: G.mor(F.mor(f)),
                   G.equal, G.is_iso, G.is_zero_obj)


# ---------------------------------------------------------------------------
# morphism families and (RF1)-(RF3)


class MorphismFamily:
    """Morphisms of ``cat`` singled out by a predicate, enumerated by sampling."""

    def __init__(self, name: str, cat, contains: Callable, samples: int = 3):
        self.name = name
        self.cat = cat
        self._contains = contains
        self.samples = samples

    def __contains__(self, f) -> bool:
        return bool(self._contains(f))

    def candidates(self, X, Y, rng: random.Random) -> list:
        H = self.cat.hom(X, Y)
        out = list(H.basis) + [H.random_element(rng) for _ in range(self.samples if H.dim else 0)]
        if X is Y or X == Y:
            out.insert(0, self.cat.identity(X))
        return out

    def enumerate(self, X, Y, rng: random.Random) -> list:
        return [f for f in self.candidates(X, Y, rng) if f in self]


def isomorphisms(cat) -> MorphismFamily:
    """Isomorphisms of ``cat`` (pass ``pq.cat`` for the isomorphisms of ``C/K``)."""
    return MorphismFamily("isomorphisms", cat, lambda f: is_isomorphism(cat, f) is not None)


def regular_family(pq) -> MorphismFamily:
    """Morphisms of ``C`` whose image in ``C/K`` is both epi and mono."""
    return MorphismFamily("regular", pq.K, pq.is_regular)


def verify_rf(family: MorphismFamily, pq, objects: Sequence | None = None, seed: int = 0,
              budget: int = 40) -> dict:
    """Check (RF1)-(RF3) and their duals, completing squares by pullback/pushout in ``C/K``."""
    rng = random.Random(seed)
    objs = list(objects) if objects is not None else [X for _, X in pq.hd.E.universe]
    Q = pq.cat
    stats = {"RF1": 0, "RF2": 0, "RF2_dual": 0, "RF3": 0, "RF3_dual": 0}

    def fail(axiom, **w):
        return check_result(False, {"axiom": axiom, **w}, **stats)

    def pick_member(X=None, Y=None, tries=12):
        for _ in range(tries):
            A = X if X is not None else rng.choice(objs)
            B = Y if Y is not None else rng.choice(objs)
            ms = family.enumerate(A, B, rng)
            if ms:
                return rng.choice(ms)
        return None

    for X in objs:
        stats["RF1"] += 1
        if pq.K.identity(X) not in family:
            return fail("RF1", reason="identity missing")
    for _ in range(budget):
        s1 = pick_member()
        if s1 is None:
            continue
        s2 = pick_member(X=s1.target)
        if s2 is None:
            continue
        stats["RF1"] += 1
        if s2 @ s1 not in family:
            return fail("RF1", reason="not closed under composition")
    for _ in range(budget):
        s = pick_member()
        if s is None:
            continue
        B = rng.choice(objs)
        # right fractions: complete B -f-> D <-s- C
        f = pq.K.hom(B, s.target).random_element(rng)
        a, b, _ = pq.pullback(s, f)
        stats["RF2"] += 1
        if not Q.is_zero(s @ a - f @ b) or b not in family:
            return fail("RF2")
        # left fractions: complete B <-f- D -s-> C
        g = pq.K.hom(s.source, B).random_element(rng)
        x, y, _ = pq.pushout(s, g)
        stats["RF2_dual"] += 1
        if not Q.is_zero(x @ s - y @ g) or y not in family:
            return fail("RF2_dual")
    for _ in range(budget):
        s = pick_member()
        if s is None:
            continue
        X = rng.choice(objs)
        f = pq.K.hom(X, s.source).random_element(rng)
        ker = _subfunctor_basis(Q, s, X, "kernel")
        f2 = f + (ker[0] if ker else pq.K.zero_map(X, s.source))
        d = f - f2
        k = pq.kernel(d)
        stats["RF3"] += 1
        if not Q.is_zero(d @ k) or k not in family:
            return fail("RF3")
        Y = rng.choice(objs)
        g = pq.K.hom(s.target, Y).random_element(rng)
        cok = _subfunctor_basis(Q, s, Y, "cokernel")
        g2 = g + (cok[0] if cok else pq.K.zero_map(s.target, Y))
        c = pq.cokernel(g - g2)
        stats["RF3_dual"] += 1
        if not Q.is_zero(c @ (g - g2)) or c not in family:
            return fail("RF3_dual")
    return check_result(True, **stats)


# ---------------------------------------------------------------------------
# fractions


@dataclass(frozen=True)
class Fraction:
    """``f ∘ s⁻¹`` for a roof ``X <-s- W -f-> Y`` with ``s`` in the family."""

    s: Any
    f: Any

    @property
    def source(self):
        return self.s.target

    @property
    def target(self):
        return self.f.target


class FractionCategory:
    """``(C/K)[ℝ⁻¹]`` with equality transported along ``coh`` into ``H/W``."""

    def __init__(self, pq, family: MorphismFamily | None = None, seed: int = 0):
        self.pq = pq
        self.hd = pq.hd
        self.K = pq.K
        self.family = family or regular_family(pq)
        self.rng = random.Random(seed)
        self.objects = [X for _, X in self.hd.E.universe]

    def identity(self, X) -> Fraction:
        i = self.K.identity(X)
        return Fraction(i, i)

    def from_morphism(self, f) -> Fraction:
        return Fraction(self.K.identity(f.source), f)

    def transport(self, fr: Fraction):
        """The image ``coh(f) ∘ coh(s)⁻¹`` in ``H/W``."""
        hd = self.hd
        inv = is_isomorphism(hd.quot, hd.coh_map(fr.s))
        if inv is None:
            raise HypothesisError("denominator does not become invertible", {"fraction": repr(fr)})
        return hd.coh_map(fr.f) @ inv

    def equal(self, a: Fraction, b: Fraction) -> bool:
        Q = self.hd.quot
        ta, tb = self.transport(a), self.transport(b)
        H = Q.hom(ta.source, ta.target)
        return H.coords(ta) == H.coords(tb)

    def compose(self, b: Fraction, a: Fraction, swap: bool = False) -> Fraction:
        """``b ∘ a`` through an Ore square completing ``a.f`` against ``b.s``."""
        if swap:
            y, x, _ = self.pq.pullback(a.f, b.s)
        else:
            x, y, _ = self.pq.pullback(b.s, a.f)
        # b.s ∘ x = a.f ∘ y with y regular
        return Fraction(a.s @ y, b.f @ x)

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        x, y, _ = self.pq.pullback(a.s, b.s)
        return Fraction(a.s @ x, a.f @ x + b.f @ y)

    def fractions(self, X, Y) -> list[Fraction]:
        out = []
        for W in self.objects:
            ss = self.family.enumerate(W, X, self.rng)
            if not ss:
                continue
            for s in ss[:2]:
                for f in self.K.hom(W, Y).basis:
                    out.append(Fraction(s, f))
        return out

    def hom_dim(self, X, Y) -> int:
        hd = self.hd
        H = hd.quot.hom(hd.coh(X), hd.coh(Y))
        vecs = [H.coords(self.transport(fr)) for fr in self.fractions(X, Y)]
        vecs = [v for v in vecs if any(v)]
        return rank(Mat.from_columns(vecs, H.dim, self.K.field)) if vecs else 0

    def hom_dim_check(self, objects: Sequence | None = None) -> dict:
        hd = self.hd
        objs = list(objects) if objects is not None else self.objects
        pairs = 0
        for X in objs:
            for Y in objs:
                pairs += 1
                want = hd.quot.hom(hd.coh(X), hd.coh(Y)).dim
                got = self.hom_dim(X, Y)
                if got != want:
                    return check_result(False, {"pair": [repr(X), repr(Y)], "fractions": got, "heart": want}, pairs=pairs)
        return check_result(True, pairs=pairs)

    def law_checks(self, samples: int = 30) -> dict:
        """Associativity, units, additivity, independence of Ore choices, roof expansion."""
        rng = self.rng
        objs = self.objects
        n = 0

        def rand_fraction(X, Y):
            fs = self.fractions(X, Y) + [self.from_morphism(self.K.zero_map(X, Y))]
            fr = rng.choice(fs)
            return Fraction(fr.s, self.K.hom(fr.s.source, Y).random_element(rng))

        for _ in range(samples):
            X, Y, Z, T = (rng.choice(objs) for _ in range(4))
            a, b, c = rand_fraction(X, Y), rand_fraction(Y, Z), rand_fraction(Z, T)
            if a is None or b is None or c is None:
                continue
            n += 1
            left = self.compose(c, self.compose(b, a))
            right = self.compose(self.compose(c, b), a)
            if not self.equal(left, right):
                return check_result(False, {"law": "associativity"}, checked=n)
            if not (self.equal(self.compose(self.identity(Y), a), a) and self.equal(self.compose(a, self.identity(X)), a)):
                return check_result(False, {"law": "units"}, checked=n)
            if not self.equal(self.compose(b, a), self.compose(b, a, swap=True)):
                return check_result(False, {"law": "ore_choice"}, checked=n)
            a2 = rand_fraction(X, Y)
            if a2 is not None:
                Q = self.hd.quot
                s = self.add(a, a2)
                ts, t1, t2 = self.transport(s), self.transport(a), self.transport(a2)
                H = Q.hom(ts.source, ts.target)
                if H.coords(ts) != H.coords(t1 + t2):
                    return check_result(False, {"law": "additivity"}, checked=n)
            rs = self.family.enumerate(a.s.source, a.s.source, rng)
            if rs:
                r = rng.choice(rs)
                if not self.equal(Fraction(a.s @ r, a.f @ r), a):
                    return check_result(False, {"law": "expansion"}, checked=n)
            inv = Fraction(a.f, a.s) if a.f in self.family else None
            if inv is not None and not self.equal(self.compose(inv, a), self.identity(X)):
                return check_result(False, {"law": "reversed_roof"}, checked=n)
        return check_result(True, checked=n)

    def coh_agreement(self) -> dict:
        """``L_ℝ ϖ X ≅ L_ℝ ϖ coh X`` through the roof ``X <-p- RX -ι-> LRX``."""
        G = self.hd.ghtcp
        for name, X in self.hd.E.universe:
            p, i = G.p(X), G.iota(G.R(X))
            if not (self.pq.is_regular(p) and self.pq.is_regular(i)):
                return check_result(False, {"object": name, "reason": "roof legs not regular"})
            if is_isomorphism(self.hd.quot, self.transport(Fraction(p, i))) is None:
                return check_result(False, {"object": name, "reason": "roof not invertible"})
        return check_result(True)


def fraction_category(pq, seed: int = 0) -> FractionCategory:
    return FractionCategory(pq, seed=seed)


# ---------------------------------------------------------------------------
# additive quotients as localizations


def section_family(cat, X, I_gens: Sequence, rng: random.Random, samples: int = 2) -> list:
    """Sections ``(1, a)ᵀ: X → X ⊕ I`` for ``I`` among the generators."""
    out = []
    for I in I_gens:
        H = cat.hom(X, I)
        for a in [H.zero] + list(H.basis) + [H.random_element(rng) for _ in range(samples if H.dim else 0)]:
            s, _ = col(cat, [cat.identity(X), a], X)
            out.append(s)
    return out


def additive_quotient_universality(cat, I_gens: Sequence, objects: Sequence, functors: Sequence[Functor] = (),
                                   seed: int = 0) -> dict:
    """``π: C → C/I`` inverts the sections with cokernel in ``add I`` and every
    functor inverting them factors through ``π``."""
    rng = random.Random(seed)
    Q = QuotientCategory(cat, list(I_gens))
    objs = list(objects)
    sections = [s for X in objs for s in section_family(cat, X, I_gens, rng)]
    inverted = all(is_isomorphism(Q, s) is not None for s in sections)
    per_functor = {}
    for F in functors:
        inverts = all(F.is_iso(F.mor(s)) for s in sections)
        factors = True
        if inverts:
            for X in objs:
                for Y in objs:
                    H = cat.hom(X, Y)
                    if not H.dim:
                        continue
                    f = H.random_element(rng)
                    for v in ideal_vectors(cat, X, Y, I_gens):
                        if not F.equal(F.mor(f), F.mor(f + H.combine(v))):
                            factors = False
                            break
                    if not factors:
                        break
                if not factors:
                    break
        per_functor[F.name] = {"inverts_sections": inverts, "factors": factors if inverts else None}
    classes: list = []
    for X in objs:
        if Q.hom(X, X).dim == 0:
            continue
        if not any(isomorphic(Q, Y, X) is not None for Y in classes):
            classes.append(X)
    return {
        "ok": inverted and all(v["factors"] is not False for v in per_functor.values()),
        "sections": len(sections),
        "sections_inverted": inverted,
        "functors": per_functor,
        "nonzero_indecomposables": len(classes),
    }


# ---------------------------------------------------------------------------
# equivalences


@dataclass
class EquivalenceWitness:
    ok: bool
    hom_dims: dict = field(default_factory=dict)
    density: dict = field(default_factory=dict)
    failure: dict | None = None

    def as_report(self) -> dict:
        return {"ok": self.ok, "pairs": len(self.hom_dims), "density": dict(sorted(self.density.items())),
                "witness": self.failure}


def equivalence_check(F: Functor, source, source_objects: Sequence[tuple], target, target_universe,
                      seed: int = 0) -> EquivalenceWitness:
    """Fully faithful on every source pair and dense on the target universe."""
    rng = random.Random(seed)
    items = list(source_objects)
    images = {n: F.obj(X) for n, X in items}
    dims = {}
    for n1, X in items:
        if not F.equal(F.mor(source.identity(X)), target.identity(images[n1])):
            return EquivalenceWitness(False, dims, {}, {"identity": n1})
        for n2, Y in items:
            Hs, Ht = source.hom(X, Y), target.hom(images[n1], images[n2])
            if Hs.dim != Ht.dim:
                return EquivalenceWitness(False, dims, {}, {"pair": [n1, n2], "source_dim": Hs.dim, "target_dim": Ht.dim})
            if Hs.dim:
                r = rank(Mat.from_columns([Ht.coords(F.mor(b)) for b in Hs.basis], Ht.dim, target.field))
                if r != Hs.dim:
                    return EquivalenceWitness(False, dims, {}, {"pair": [n1, n2], "rank": r})
            dims[(n1, n2)] = Hs.dim
    # composition on a few sampled composable pairs
    for _ in range(min(20, len(items) ** 2)):
        (a, X), (b, Y), (c, Z) = (rng.choice(items) for _ in range(3))
        f, g = source.hom(X, Y).random_element(rng), source.hom(Y, Z).random_element(rng)
        if not F.equal(F.mor(g @ f), F.mor(g) @ F.mor(f)):
            return EquivalenceWitness(False, dims, {}, {"composition": [a, b, c]})
    density = {}
    for tn, T in target_universe:
        hit = next((n for n, _ in items if isomorphic(target, images[n], T) is not None), None)
        if hit is None:
            return EquivalenceWitness(False, dims, density, {"not_dense": tn})
        density[tn] = hit
    return EquivalenceWitness(True, dims, density)


def non_exactness_probe(source_E, target_E, obj_map: dict) -> dict:
    """Look for a non-split conflation of the source whose image has no nonsplit realization.

    ``obj_map`` sends source universe names to target objects.  A nonzero
    source class with ``E(F C, F A) = 0`` on the target side is a witness that
    the equivalence does not send conflations to conflations.
    """
    checked = 0
    for cn, C in source_E.universe:
        for an, A in source_E.universe:
            d = source_E.e_dim(C, A)
            if not d:
                continue
            checked += 1
            if target_E.e_dim(obj_map[cn], obj_map[an]) == 0:
                conf = source_E.realize(C, A, [source_E.field.one] + [source_E.field.zero] * (d - 1))
                middle = dict(source_E.universe.decompose(conf.middle))
                return {"exact": False, "checked": checked,
                        "witness": {"left": an, "right": cn, "middle": dict(sorted(middle.items())),
                                    "target_E": 0}}
    return {"exact": True, "checked": checked, "witness": None}


# ---------------------------------------------------------------------------
# universality of coh


def _exact_at_middle(A: Mat, B: Mat, dim_mid: int) -> bool:
    if dim_mid == 0:
        return True
    if A.ncols and B.nrows and not (B @ A).is_zero():
        return False
    ra = rank(A) if A.ncols and A.nrows else 0
    rb = rank(B) if B.ncols and B.nrows else 0
    return ra == dim_mid - rb


def universal_coh_factor(hd, H: Functor, triangles: Sequence | None = None) -> dict:
    """Factor a cohomological ``H`` killing ``K`` as ``H' ∘ coh``.

    ``H`` must take values in matrices (e.g. :func:`hom_functor`).  Returns
    the table of ``H'`` on heart representatives and the naturality checks.
    """
    if hd.K0 is None:
        raise HypothesisError("K0 missing")
    for i, X in enumerate(hd.K0):
        if H.obj(X):
            raise HypothesisError("functor does not kill K", {"generator": i, "dim": H.obj(X)})
    for X in hd.W_gens:
        if H.obj(X):
            raise HypothesisError("functor does not kill W", {"object": repr(X)})
    tris = triangles if triangles is not None else hd.canonical_triangles()
    for name, f, g in tris:
        if not _exact_at_middle(H.mor(f), H.mor(g), H.obj(f.target)):
            raise HypothesisError("functor is not cohomological", {"triangle": name})
    G = hd.ghtcp
    table = {}
    for n, X in hd.E.universe:
        if X in hd.H:
            table[n] = H.obj(X)
    # H(X) ≅ H(coh X) through H(ι_RX) H(p_X)⁻¹, natural in X

    def comparison(X):
        inv = inverse(H.mor(G.p(X)))
        return None if inv is None else H.mor(G.iota(G.R(X))) @ inv

    objs = 0
    for n, X in hd.E.universe:
        objs += 1
        if H.obj(X) != H.obj(hd.coh(X)) or comparison(X) is None:
            return check_result(False, {"object": n}, table=table)
    mors = 0
    for name, f in G.universe_morphisms():
        cx, cy = comparison(f.source), comparison(f.target)
        mors += 1
        if H.mor(hd.coh_map(f)) @ cx != cy @ H.mor(f):
            return check_result(False, {"morphism": name}, table=table)
    return check_result(True, objects=objs, morphisms=mors, table=table)
