"""Extriangulated structure over the module and complex backends.

``ExtriCat`` wraps a backend together with a finite universe of
indecomposables and exposes extensions, conflations, cones and cocones in
one vocabulary.  On modules the extensions are Ext¹ and conflations are
short exact sequences; on complexes ``E(Z, X) = Hom(Z, X[1])`` and
conflations are distinguished triangles.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .addcat import (
    QuotientCategory,
    Universe,
    add_membership,
    is_isomorphism,
    is_zero_object,
    solve_morphism,
)
from .quivrep import ModuleCategory, ShortExact
from .tricplx import ComplexCategory


class NotAConflation(ValueError):
    """The morphism is not an inflation (or deflation) in this structure."""


class ExtensionClosureError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class OrthogonalityError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass
class Conflation:
    """``X -inflation-> Y -deflation-> Z`` realizing ``delta ∈ E(Z, X)``."""

    inflation: Any
    deflation: Any
    delta: Any = None  # connecting morphism Z -> X[1] on complexes

    @property
    def left(self):
        return self.inflation.source

    @property
    def middle(self):
        return self.inflation.target

    @property
    def right(self):
        return self.deflation.target


class Subcategory:
    """Full additive subcategory closed under summands, given by a membership test."""

    def __init__(self, name: str, contains: Callable[[Any], bool], generators: Sequence | None = None, kind: str = "predicate"):
        self.name = name
        self._contains = contains
        self.generators = list(generators) if generators is not None else None
        self.kind = kind
        self._cache: dict = {}

    def __contains__(self, X) -> bool:
        r = self._cache.get(X)
        if r is None:
            r = bool(self._contains(X))
            self._cache[X] = r
        return r

    def __repr__(self):
        return f"Subcategory<{self.name}>"


class ExtriCat:
    """A backend plus its extension bifunctor and a finite universe.

    ``universe`` is the reporting universe; ``generators`` (defaulting to the
    universe) is the larger list used for approximations and cones.
    """

    def __init__(self, cat, universe: Universe, generators: Universe | None = None):
        self.cat = cat
        self.field = cat.field
        self.universe = universe
        self.generators = generators or universe
        if isinstance(cat, ModuleCategory):
            self.kind = "exact"
        elif isinstance(cat, ComplexCategory):
            self.kind = "triangulated"
        else:
            raise TypeError("unsupported backend")

    # -- subcategories -------------------------------------------------------

    def add_subcategory(self, name: str, gens: Sequence) -> Subcategory:
        gens = list(gens)
        if not gens:
            return Subcategory(name, lambda X: is_zero_object(self.cat, X), [], "add")
        return Subcategory(name, lambda X: add_membership(self.cat, X, gens).member, gens, "add")

    def predicate_subcategory(self, name: str, fn: Callable[[Any], bool]) -> Subcategory:
        return Subcategory(name, fn, None, "predicate")

    def members(self, sub: Subcategory, universe: Universe | None = None) -> list[str]:
        U = universe or self.universe
        return [n for n, X in U if X in sub]

    def member_objects(self, sub: Subcategory, universe: Universe | None = None) -> list:
        U = universe or self.generators
        return [X for _, X in U if X in sub]

    def decompose(self, X) -> Counter:
        return self.generators.decompose(X)

    # -- extensions -------------------------------------------------------------

    def e_group(self, Z, X):
        """Basis-carrying space ``E(Z, X)``."""
        if self.kind == "exact":
            return self.cat.ext1(Z, X)
        return self.cat.hom(Z, self.cat.shift(X, 1, check=False))

    def e_dim(self, Z, X) -> int:
        if self.kind == "exact":
            return self.cat.ext1(Z, X).dim
        return self.e_group(Z, X).dim

    def realize(self, Z, X, delta) -> Conflation:
        """A conflation realizing ``delta`` (coordinates in ``e_group(Z, X)``)."""
        if self.kind == "exact":
            ses = self.cat.realize_ext1(Z, X, delta)
            return Conflation(ses.i, ses.p, list(delta))
        K = self.cat
        E = self.e_group(Z, X)
        d = E.combine(delta)
        u = -K.shift_map(d, -1, check=False)
        t = K.cone(u, check=False)
        # X -> cone(u) -> Z[-1][1] = Z
        return Conflation(t.g, _retarget(K, t.h, Z), d)

    def class_of(self, c: Conflation) -> list:
        if self.kind == "exact":
            return self.cat.ext_class(ShortExact(c.inflation, c.deflation))
        K = self.cat
        t = K.cone(c.inflation, check=False)
        C = t.g.target
        X1 = K.shift(c.left, 1, check=False)
        h = _retarget(K, t.h, X1)
        cons = [(lambda p: p @ t.g, c.deflation, K.hom(c.middle, c.right))]
        if c.delta is not None:
            cons.append((lambda p: c.delta @ p, h, K.hom(C, X1)))
        H = K.hom(C, c.right)
        phi, homog = solve_morphism(H, cons)
        if phi is None:
            raise NotAConflation("sequence is not a distinguished triangle")
        # the comparison map is only determined up to the homogeneous solutions
        inv = None
        for cand in _affine_candidates(H, phi, homog):
            inv = is_isomorphism(K, cand)
            if inv is not None:
                break
        if inv is None:
            raise NotAConflation("sequence is not a distinguished triangle")
        G = self.e_group(c.right, c.left)
        return G.coords(c.delta if c.delta is not None else h @ inv)

    def is_conflation(self, c: Conflation) -> bool:
        if self.kind == "exact":
            return self.cat.is_short_exact(ShortExact(c.inflation, c.deflation))
        try:
            self.class_of(c)
            return True
        except NotAConflation:
            return False

    def cone_of_inflation(self, f) -> Conflation:
        if self.kind == "exact":
            if not self.cat.is_mono(f):
                raise NotAConflation("not a monomorphism")
            return Conflation(f, self.cat.cokernel(f))
        t = self.cat.cone(f, check=False)
        return Conflation(f, t.g, t.h)

    def cocone_of_deflation(self, g) -> Conflation:
        if self.kind == "exact":
            if not self.cat.is_epi(g):
                raise NotAConflation("not an epimorphism")
            return Conflation(self.cat.kernel(g), g)
        t = self.cat.cocone(g, check=False)
        return Conflation(t.f, g, t.h)

    def is_inflation(self, f) -> bool:
        return self.kind == "triangulated" or self.cat.is_mono(f)

    def is_deflation(self, g) -> bool:
        return self.kind == "triangulated" or self.cat.is_epi(g)

    def pullback(self, c: Conflation, z) -> tuple[Conflation, Any]:
        """Pull ``c`` back along ``z: Z' → Z``; returns the new conflation and ``E → Y``."""
        if self.kind == "exact":
            E, to_y, to_z = self.cat.pullback(c.deflation, z)
            k = self.cat.kernel(to_z)
            return Conflation(k, to_z), to_y
        # class δ' = δ∘z, realize and build the comparison map
        K = self.cat
        d = self.e_group(c.right, c.left).combine(self.class_of(c))
        dz = d @ z
        new = self.realize(z.source, c.left, self.e_group(z.source, c.left).coords(dz))
        space = K.hom(new.middle, c.middle)
        m, _ = solve_morphism(space, [
            (lambda x: x @ new.inflation, c.inflation, K.hom(c.left, c.middle)),
            (lambda x: c.deflation @ x, z @ new.deflation, K.hom(new.middle, c.right)),
        ])
        return new, m

    def pushout(self, c: Conflation, x) -> tuple[Conflation, Any]:
        """Push ``c`` out along ``x: X → X'``; returns the new conflation and ``Y → E``."""
        if self.kind == "exact":
            D, from_y, from_x = self.cat.pushout(c.inflation, x)
            cok = self.cat.cokernel(from_x)
            # identify the cokernel with Z through the old deflation
            return Conflation(from_x, cok), from_y
        K = self.cat
        d = self.e_group(c.right, c.left).combine(self.class_of(c))
        xd = K.shift_map(x, 1, check=False) @ d
        new = self.realize(c.right, x.target, self.e_group(c.right, x.target).coords(xd))
        space = K.hom(c.middle, new.middle)
        m, _ = solve_morphism(space, [
            (lambda y: y @ c.inflation, new.inflation @ x, K.hom(c.left, new.middle)),
            (lambda y: new.deflation @ y, c.deflation, K.hom(c.middle, c.right)),
        ])
        return new, m

    # -- projectivity, closure, quotients -------------------------------------

    def is_projective(self, P, test: Iterable | None = None) -> bool:
        return all(self.e_dim(P, X) == 0 for _, X in (test or self.universe))

    def is_injective(self, I, test: Iterable | None = None) -> bool:
        return all(self.e_dim(X, I) == 0 for _, X in (test or self.universe))

    def conflations_between(self, Z, X, rng: random.Random, samples: int = 2) -> list[Conflation]:
        """Realizations of each basis class and of a few random combinations."""
        E = self.e_group(Z, X)
        out = []
        n = E.dim
        vecs = [[self.field.one if i == j else self.field.zero for i in range(n)] for j in range(n)]
        for _ in range(samples if n > 1 else 0):
            vecs.append([self.field(rng.randint(-3, 3)) for _ in range(n)])
        for v in vecs:
            if any(v):
                out.append(self.realize(Z, X, v))
        return out

    def extension_closure_violation(self, sub: Subcategory, universe: Universe | None = None, seed: int = 0):
        """First conflation with outer terms in ``sub`` and middle term outside, or ``None``."""
        rng = random.Random(seed)
        mem = [(n, X) for n, X in (universe or self.universe) if X in sub]
        for na, A in mem:
            for nb, B in mem:
                for c in self.conflations_between(A, B, rng):
                    if c.middle not in sub:
                        return {"left": nb, "right": na, "class": [str(x) for x in self.class_of(c)]}
        return None

    def extension_closed_sub(self, sub: Subcategory, universe: Universe | None = None) -> "ExtriCat":
        w = self.extension_closure_violation(sub, universe)
        if w is not None:
            raise ExtensionClosureError(f"{sub.name} is not extension-closed", w)
        U = universe or self.universe
        names = [n for n, X in U if X in sub]
        return ExtriCat(self.cat, Universe(self.cat, [(n, U[n]) for n in names]))

    def orthogonality_violation(self, left: Iterable, right: Iterable):
        for nl, A in left:
            for nr, B in right:
                if self.e_dim(A, B):
                    return (nl, nr)
        return None

    def quotient_by_proj_inj(self, I_names: Sequence[str], universe: Universe | None = None) -> "QuotientExtri":
        U = universe or self.universe
        I = [(n, U[n]) for n in I_names]
        w = self.orthogonality_violation(I, U) or self.orthogonality_violation(U, I)
        if w is not None:
            raise OrthogonalityError("ideal objects are not projective-injective", w)
        return QuotientExtri(self, [X for _, X in I], U)

    def wic_check(self, pairs: Sequence[tuple]) -> dict:
        """Sampled weak idempotent completeness conditions: ``g∘f`` inflation ⇒ ``f``
        inflation, ``g∘f`` deflation ⇒ ``g`` deflation."""
        bad = []
        for f, g in pairs:
            gf = g @ f
            if self.is_inflation(gf) and not self.is_inflation(f):
                bad.append(("inflation", f, g))
            if self.is_deflation(gf) and not self.is_deflation(g):
                bad.append(("deflation", f, g))
        return {"ok": not bad, "violations": len(bad), "interpreted": True}


class QuotientExtri:
    """Induced structure on ``C/[I]`` when ``I`` is projective-injective."""

    def __init__(self, base: ExtriCat, I_objects: Sequence, universe: Universe):
        self.base = base
        self.cat = QuotientCategory(base.cat, list(I_objects))
        self.universe = universe

    def e_dim(self, Z, X) -> int:
        return self.base.e_dim(Z, X)

    def is_split(self) -> bool:
        return all(self.e_dim(A, B) == 0 for _, A in self.universe for _, B in self.universe)


def _affine_candidates(H, x, homog, tries: int = 24):
    """``x``, ``x + h_i``, then a fixed pseudo-random walk through ``x + span(homog)``."""
    yield x
    if not homog:
        return
    for b in homog:
        yield H.combine([a + b_ for a, b_ in zip(H.coords(x), H.coords(b))])
    rng = random.Random(len(homog))
    for _ in range(tries):
        v = list(H.coords(x))
        for b in homog:
            k = rng.randint(-2, 2)
            v = [a + k * b_ for a, b_ in zip(v, H.coords(b))]
        yield H.combine(v)


def _retarget(K: ComplexCategory, f, Y):
    """Same components, target replaced by an equal-on-the-nose complex."""
    from .tricplx import ChainMap
    return ChainMap(f.source, Y, {n: c for n, c in f.comps.items() if n in Y.terms})
