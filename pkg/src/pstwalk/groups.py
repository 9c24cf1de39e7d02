"""Conjugacy classes and exact character tables for 2x2 matrix groups.

Three families over odd finite fields:

* :class:`GLGroup` -- invertible matrices over F_q;
* :class:`SLGroup` -- determinant-one matrices over F_q, q an odd prime;
* :class:`GUGroup` -- unitary matrices over F_{q^2}: matrices M with
  ``M* M = I``, where ``M*`` is the transpose with every entry raised
  to the q-th power.

A matrix is a :class:`Mat2` of four integer encodings into the family's
``field`` -- the base field for GL/SL, the quadratic extension for GU.
Conjugacy classes and irreducible characters are identified by frozen
:class:`ClassLabel` / :class:`IrrLabel` values, and character values are
exact cyclotomic sums (:class:`~pstwalk.chars.CycSum`) sharing a single
root order per family (``q^2 - 1`` for GL/GU, ``lcm(q^2 - 1, q)`` for
SL), so spectra assembled from them never leave exact arithmetic.

Every family exposes the same surface: ``classes()``, ``class_size``,
``class_rep``, ``classify``, ``irreducibles()``, ``degree``,
``char_value``, ``enumerate_group``, ``class_partition``,
``central_involution`` and ``involution_sign``.

Class kinds
-----------
``central``
    scalar matrices x*I, parameter ``(x,)``.
``jordan``
    one repeated eigenvalue on a nontrivial Jordan block; parameter
    ``(x,)`` for GL/GU, ``(eps, c)`` with ``c in {1, delta}`` for the
    four SL classes (``delta`` the canonical non-square).
``split``
    two distinct eigenvalues inside the relevant torus (F_q^x for GL,
    the norm-one subgroup E for GU, an inverse pair {x, 1/x} for SL);
    pairs are stored sorted by encoding, inverse pairs by the member
    with the smaller discrete log.
``nonsplit``
    an eigenvalue pair outside that torus, stored via the orbit member
    with the smaller discrete log.

Character kinds
---------------
``linear`` (degree 1), ``steinberg`` (degree q), ``principal`` (induced
from a split torus character pair; degree q+1 for GL/SL, q-1 for GU) and
``cuspidal`` (indexed by characters of the nonsplit torus; degree q-1
for GL/SL, q+1 for GU).  SL additionally has two half-degree pairs,
``principal_half`` of degree (q+1)/2 and ``cuspidal_half`` of degree
(q-1)/2, with parameter +1 or -1.  Their values on central and jordan
classes involve quadratic residue periods and are tabulated here; their
values on split and nonsplit classes are pinned down by orthogonality
and exposed only through :meth:`SLGroup.char_value_full` -- the plain
:meth:`SLGroup.char_value` raises :class:`UntabulatedCharacterError`
there.  Orthogonality of the resulting full table is checked in the
test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import NamedTuple

from .chars import CycSum, MultChar, integer_part, residue_periods
from .gf import FieldTower, FiniteField, make_tower

__all__ = [
    "Mat2",
    "ClassLabel",
    "IrrLabel",
    "UntabulatedCharacterError",
    "GLGroup",
    "GUGroup",
    "SLGroup",
    "mat_identity",
    "mat_scalar",
    "mat_mul",
    "mat_det",
    "mat_trace",
    "mat_neg",
    "mat_inv",
]


class Mat2(NamedTuple):
    """A 2x2 matrix ``[[a, b], [c, d]]`` of integer field encodings."""

    a: int
    b: int
    c: int
    d: int


class UntabulatedCharacterError(LookupError):
    """A character value that the tabulated data does not determine."""


@dataclass(frozen=True, order=True)
class ClassLabel:
    """A conjugacy class: family tag, kind, and canonical parameters."""

    family: str
    kind: str
    params: tuple[int, ...]


@dataclass(frozen=True, order=True)
class IrrLabel:
    """An irreducible character: family tag, kind, canonical parameters."""

    family: str
    kind: str
    params: tuple[int, ...]


# ---------------------------------------------------------------------------
# matrix arithmetic on integer encodings


def mat_identity(F: FiniteField) -> Mat2:
    return Mat2(1, 0, 0, 1)


def mat_scalar(F: FiniteField, x: int) -> Mat2:
    return Mat2(x, 0, 0, x)


def mat_mul(F: FiniteField, m: Mat2, n: Mat2) -> Mat2:
    return Mat2(
        F.add(F.mul(m.a, n.a), F.mul(m.b, n.c)),
        F.add(F.mul(m.a, n.b), F.mul(m.b, n.d)),
        F.add(F.mul(m.c, n.a), F.mul(m.d, n.c)),
        F.add(F.mul(m.c, n.b), F.mul(m.d, n.d)),
    )


def mat_det(F: FiniteField, m: Mat2) -> int:
    return F.sub(F.mul(m.a, m.d), F.mul(m.b, m.c))


def mat_trace(F: FiniteField, m: Mat2) -> int:
    return F.add(m.a, m.d)


def mat_neg(F: FiniteField, m: Mat2) -> Mat2:
    return Mat2(F.neg(m.a), F.neg(m.b), F.neg(m.c), F.neg(m.d))


def mat_inv(F: FiniteField, m: Mat2) -> Mat2:
    di = F.inv(mat_det(F, m))
    return Mat2(
        F.mul(di, m.d),
        F.mul(di, F.neg(m.b)),
        F.mul(di, F.neg(m.c)),
        F.mul(di, m.a),
    )


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    k, m = 0, q
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, k


# ---------------------------------------------------------------------------


class _Family:
    """Shared machinery; subclasses fill in the family-specific pieces."""

    family: str
    q: int
    order: int
    field: FiniteField
    tower: FieldTower
    root_order: int

    # -- matrix helpers bound to the family's coefficient field ------------

    def identity(self) -> Mat2:
        return mat_identity(self.field)

    def mul(self, m: Mat2, n: Mat2) -> Mat2:
        return mat_mul(self.field, m, n)

    def inv(self, m: Mat2) -> Mat2:
        return mat_inv(self.field, m)

    def det(self, m: Mat2) -> int:
        return mat_det(self.field, m)

    def trace(self, m: Mat2) -> int:
        return mat_trace(self.field, m)

    def element_order(self, m: Mat2) -> int:
        ident = self.identity()
        acc, k = m, 1
        while acc != ident:
            acc = self.mul(acc, m)
            k += 1
            if k > self.order:  # pragma: no cover - not a group element
                raise ValueError("element order exceeds the group order")
        return k

    # -- class machinery ----------------------------------------------------

    def classes(self) -> tuple[ClassLabel, ...]:
        return self._classes

    def irreducibles(self) -> tuple[IrrLabel, ...]:
        return self._irreducibles

    def class_partition(self) -> dict[ClassLabel, tuple[Mat2, ...]]:
        """Group elements bucketed by conjugacy class (built once)."""
        cached = getattr(self, "_partition", None)
        if cached is None:
            part: dict[ClassLabel, list[Mat2]] = {c: [] for c in self.classes()}
            for m in self.enumerate_group():
                part[self.classify(m)].append(m)
            cached = {c: tuple(v) for c, v in part.items()}
            self._partition = cached
        return cached

    def class_elements(self, label: ClassLabel) -> tuple[Mat2, ...]:
        return self.class_partition()[label]

    def central_involution(self) -> Mat2:
        """The central order-2 element -I."""
        return mat_scalar(self.field, self.field.neg(1))

    def central_involution_class(self) -> ClassLabel:
        return self.classify(self.central_involution())

    def involution_sign(self, irr: IrrLabel) -> int:
        """chi(-I)/chi(1), always +1 or -1."""
        v = integer_part(self.char_value(irr, self.central_involution_class()))
        d = self.degree(irr)
        if v == d:
            return 1
        if v == -d:
            return -1
        raise ValueError(f"central character of {irr} is not a sign")  # pragma: no cover

    # -- family-specific ----------------------------------------------------

    def enumerate_group(self) -> list[Mat2]:  # pragma: no cover - abstract
        raise NotImplementedError

    def classify(self, m: Mat2) -> ClassLabel:  # pragma: no cover - abstract
        raise NotImplementedError

    def class_size(self, label: ClassLabel) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def class_rep(self, label: ClassLabel) -> Mat2:  # pragma: no cover - abstract
        raise NotImplementedError

    def degree(self, irr: IrrLabel) -> int:  # pragma: no cover - abstract
        raise NotImplementedError

    def char_value(self, irr: IrrLabel, cls: ClassLabel) -> CycSum:  # pragma: no cover
        raise NotImplementedError

    def __repr__(self) -> str:  # pragma: no cover
        return f"{type(self).__name__}(q={self.q})"


# ---------------------------------------------------------------------------


class GLGroup(_Family):
    """GL(2, q): all invertible 2x2 matrices over F_q (q an odd prime power)."""

    family = "gl"

    def __init__(self, q: int):
        p, k = _prime_power(q)
        if p == 2:
            raise ValueError("only odd characteristic is supported")
        self.q, self.p, self.k = q, p, k
        self.tower = make_tower(p, k)
        self.field = self.tower.base
        self.root_order = q * q - 1
        self.order = (q * q - 1) * (q * q - q)
        self._classes = self._build_classes()
        self._irreducibles = self._build_irreducibles()

    # -- classes ------------------------------------------------------------

    def _build_classes(self) -> tuple[ClassLabel, ...]:
        q, ext = self.q, self.tower.ext
        n = q * q - 1
        units = range(1, q)
        out = [ClassLabel("gl", "central", (x,)) for x in units]
        out += [ClassLabel("gl", "jordan", (x,)) for x in units]
        out += [
            ClassLabel("gl", "split", (x, y))
            for x in units
            for y in units
            if x < y
        ]
        for dz in range(n):
            # z outside F_q: q+1 does not divide dlog; orbit {z, z^q}
            if dz % (q + 1) == 0 or (dz * q) % n < dz:
                continue
            out.append(ClassLabel("gl", "nonsplit", (ext.exp[dz],)))
        return tuple(out)

    def class_size(self, label: ClassLabel) -> int:
        q = self.q
        return {
            "central": 1,
            "jordan": q * q - 1,
            "split": q * (q + 1),
            "nonsplit": q * (q - 1),
        }[label.kind]

    def class_rep(self, label: ClassLabel) -> Mat2:
        F, tw = self.field, self.tower
        kind, params = label.kind, label.params
        if kind == "central":
            return mat_scalar(F, params[0])
        if kind == "jordan":
            x = params[0]
            return Mat2(x, 1, 0, x)
        if kind == "split":
            x, y = params
            return Mat2(x, 0, 0, y)
        # companion matrix of the eigenvalue pair's minimal polynomial
        z = params[0]
        tr = tw.project(tw.ext.add(z, tw.conj(z)))
        return Mat2(0, F.neg(tw.norm(z)), 1, tr)

    def classify(self, m: Mat2) -> ClassLabel:
        F, tw = self.field, self.tower
        if m.b == 0 and m.c == 0 and m.a == m.d:
            if m.a == 0:
                raise ValueError("matrix is singular")
            return ClassLabel("gl", "central", (m.a,))
        t, d = mat_trace(F, m), mat_det(F, m)
        if d == 0:
            raise ValueError("matrix is singular")
        two = F.add(1, 1)
        disc = F.sub(F.mul(t, t), F.mul(F.mul(two, two), d))
        if disc == 0:
            return ClassLabel("gl", "jordan", (F.div(t, two),))
        s = F.sqrt(disc)
        if s is not None:
            x = F.div(F.add(t, s), two)
            y = F.div(F.sub(t, s), two)
            return ClassLabel("gl", "split", tuple(sorted((x, y))))
        ext = tw.ext
        se = ext.sqrt(tw.embed(disc))
        z = ext.div(ext.add(tw.embed(t), se), tw.embed(two))
        zq = tw.conj(z)
        zc = z if ext.log[z] <= ext.log[zq] else zq
        return ClassLabel("gl", "nonsplit", (zc,))

    def enumerate_group(self) -> list[Mat2]:
        F, q = self.field, self.q
        out = []
        for a in range(q):
            for b in range(q):
                for c in range(q):
                    for d in range(q):
                        if F.sub(F.mul(a, d), F.mul(b, c)) != 0:
                            out.append(Mat2(a, b, c, d))
        return out

    # -- characters ----------------------------------------------------------

    def _build_irreducibles(self) -> tuple[IrrLabel, ...]:
        q = self.q
        n = q * q - 1
        out = [IrrLabel("gl", "linear", (j,)) for j in range(q - 1)]
        out += [IrrLabel("gl", "steinberg", (j,)) for j in range(q - 1)]
        out += [
            IrrLabel("gl", "principal", (i, j))
            for i in range(q - 1)
            for j in range(i + 1, q - 1)
        ]
        out += [
            IrrLabel("gl", "cuspidal", (m,))
            for m in range(1, n)
            if m % (q + 1) and (m * q) % n > m
        ]
        return tuple(out)

    def trivial_character(self) -> IrrLabel:
        return IrrLabel("gl", "linear", (0,))

    def degree(self, irr: IrrLabel) -> int:
        q = self.q
        return {"linear": 1, "steinberg": q, "principal": q + 1, "cuspidal": q - 1}[
            irr.kind
        ]

    def char_value(self, irr: IrrLabel, cls: ClassLabel) -> CycSum:
        q, n = self.q, self.root_order
        F, tw = self.field, self.tower
        kind, ck = irr.kind, cls.kind

        if kind in ("linear", "steinberg"):
            lam = MultChar(q - 1, irr.params[0])
            if ck in ("central", "jordan"):
                v = lam.at(2 * F.dlog(cls.params[0]), n)
                if kind == "steinberg":
                    return v * q if ck == "central" else CycSum.zero(n)
                return v
            if ck == "split":
                x, y = cls.params
                return lam.at(F.dlog(x) + F.dlog(y), n)
            v = lam.at(F.dlog(tw.norm(cls.params[0])), n)
            return -v if kind == "steinberg" else v

        if kind == "principal":
            i, j = irr.params
            if ck in ("central", "jordan"):
                v = MultChar(q - 1, i + j).at(F.dlog(cls.params[0]), n)
                return v * (q + 1) if ck == "central" else v
            if ck == "split":
                dx, dy = F.dlog(cls.params[0]), F.dlog(cls.params[1])
                ci, cj = MultChar(q - 1, i), MultChar(q - 1, j)
                return ci.at(dx, n) * cj.at(dy, n) + ci.at(dy, n) * cj.at(dx, n)
            return CycSum.zero(n)

        # cuspidal, indexed by a character of F_{q^2}^x
        mu = MultChar(n, irr.params[0])
        ext = tw.ext
        if ck in ("central", "jordan"):
            v = mu(ext.dlog(tw.embed(cls.params[0])))
            return v * (q - 1) if ck == "central" else -v
        if ck == "split":
            return CycSum.zero(n)
        dz = ext.dlog(cls.params[0])
        return -(mu(dz) + mu(dz * q))


# ---------------------------------------------------------------------------


class GUGroup(_Family):
    """GU(2, q): unitary 2x2 matrices over F_{q^2} (q an odd prime power).

    Membership means ``M* M = I`` for the conjugate transpose ``M*``
    twisted by the q-power Frobenius.  Matrix entries are encodings in
    the *extension* field F_{q^2}; eigenvalues of group elements always
    lie there too.  The torus carrying the class/character parameters is
    the norm-one subgroup E of order q+1.
    """

    family = "gu"

    def __init__(self, q: int):
        p, k = _prime_power(q)
        if p == 2:
            raise ValueError("only odd characteristic is supported")
        self.q, self.p, self.k = q, p, k
        self.tower = make_tower(p, k)
        self.field = self.tower.ext
        self.root_order = q * q - 1
        self.order = q * (q - 1) * (q + 1) ** 2
        self._classes = self._build_classes()
        self._irreducibles = self._build_irreducibles()

    # -- membership -----------------------------------------------------------

    def conj_transpose(self, m: Mat2) -> Mat2:
        bar = self.tower.conj
        return Mat2(bar(m.a), bar(m.c), bar(m.b), bar(m.d))

    def is_member(self, m: Mat2) -> bool:
        return self.mul(self.conj_transpose(m), m) == self.identity()

    # -- classes ---------------------------------------------------------------

    def _build_classes(self) -> tuple[ClassLabel, ...]:
        q, tw = self.q, self.tower
        ext, E = tw.ext, tw.E
        n = q * q - 1
        out = [ClassLabel("gu", "central", (x,)) for x in E]
        out += [ClassLabel("gu", "jordan", (x,)) for x in E]
        out += [
            ClassLabel("gu", "split", tuple(sorted((E[i], E[j]))))
            for i in range(q + 1)
            for j in range(i + 1, q + 1)
        ]
        for dz in range(n):
            # z outside E: q-1 does not divide dlog; orbit {z, z^(-q)}
            if dz % (q - 1) == 0 or (-dz * q) % n < dz:
                continue
            out.append(ClassLabel("gu", "nonsplit", (ext.exp[dz],)))
        return tuple(out)

    def class_size(self, label: ClassLabel) -> int:
        q = self.q
        return {
            "central": 1,
            "jordan": q * q - 1,
            "split": q * (q - 1),
            "nonsplit": q * (q + 1),
        }[label.kind]

    def _isotropic_params(self) -> list[int]:
        """Encodings a with Nm(a) = -1, smallest discrete logs first."""
        tw = self.tower
        fiber = tw.norm_fiber(tw.base.neg(1))
        return sorted(fiber, key=lambda z: tw.ext.log[z])

    def class_rep(self, label: ClassLabel) -> Mat2:
        F, tw = self.field, self.tower
        kind, params = label.kind, label.params
        if kind == "central":
            return mat_scalar(F, params[0])
        if kind == "split":
            x, y = params
            return Mat2(x, 0, 0, y)
        if kind == "jordan":
            # x * (I + c v v*) with v = (a0, 1) isotropic and c + c^q = 0
            x = params[0]
            a0 = self._isotropic_params()[0]
            c = next(c for c in range(1, F.q) if F.add(tw.conj(c), c) == 0)
            u = Mat2(
                F.add(1, F.mul(c, F.mul(a0, tw.conj(a0)))),
                F.mul(c, a0),
                F.mul(c, tw.conj(a0)),
                F.add(1, c),
            )
            rep = self.mul(mat_scalar(F, x), u)
        else:
            # conjugate diag(z, z^(-q)) into the group via an isotropic basis
            z = params[0]
            w = F.inv(tw.conj(z))
            f1, f2 = self._isotropic_params()[:2]
            den = F.inv(F.sub(f1, f2))
            rep = Mat2(
                F.mul(den, F.sub(F.mul(f1, z), F.mul(f2, w))),
                F.mul(den, F.mul(F.mul(f1, f2), F.sub(w, z))),
                F.mul(den, F.sub(z, w)),
                F.mul(den, F.sub(F.mul(f1, w), F.mul(f2, z))),
            )
        if not self.is_member(rep):  # pragma: no cover - construction invariant
            raise RuntimeError(f"constructed representative for {label} is not unitary")
        return rep

    def classify(self, m: Mat2) -> ClassLabel:
        F, tw = self.field, self.tower
        E_log = tw.E_log
        if m.b == 0 and m.c == 0 and m.a == m.d:
            if m.a not in E_log:
                raise ValueError("scalar matrix with determinant outside the norm-one torus")
            return ClassLabel("gu", "central", (m.a,))
        t, d = mat_trace(F, m), mat_det(F, m)
        two = F.add(1, 1)
        disc = F.sub(F.mul(t, t), F.mul(F.mul(two, two), d))
        if disc == 0:
            x = F.div(t, two)
            if x not in E_log:
                raise ValueError("repeated eigenvalue outside the norm-one torus")
            return ClassLabel("gu", "jordan", (x,))
        s = F.sqrt(disc)
        if s is None:
            raise ValueError("eigenvalues leave F_{q^2}; matrix is not unitary")
        r1 = F.div(F.add(t, s), two)
        r2 = F.div(F.sub(t, s), two)
        if r1 in E_log and r2 in E_log:
            return ClassLabel("gu", "split", tuple(sorted((r1, r2))))
        if r2 != F.inv(tw.conj(r1)):
            raise ValueError("eigenvalue pair is not norm-dual; matrix is not unitary")
        zc = r1 if F.log[r1] <= F.log[r2] else r2
        return ClassLabel("gu", "nonsplit", (zc,))

    def enumerate_group(self) -> list[Mat2]:
        """All members, via orthonormal column pairs.

        First columns u = (a, c) run over vectors of norm 1; for each,
        the second column runs over lambda * (c^q, -a^q) with lambda in
        E, which are exactly the norm-1 vectors orthogonal to u.
        """
        F, tw = self.field, self.tower
        base = tw.base
        out = []
        for a in range(F.q):
            na = tw.norm(a)
            for c in range(F.q):
                if base.add(na, tw.norm(c)) != 1:
                    continue
                aq, cq = tw.conj(a), tw.conj(c)
                for lam in tw.E:
                    out.append(
                        Mat2(a, F.mul(lam, cq), c, F.neg(F.mul(lam, aq)))
                    )
        return out

    # -- characters -------------------------------------------------------------

    def _build_irreducibles(self) -> tuple[IrrLabel, ...]:
        q = self.q
        n = q * q - 1
        out = [IrrLabel("gu", "linear", (j,)) for j in range(q + 1)]
        out += [IrrLabel("gu", "steinberg", (j,)) for j in range(q + 1)]
        out += [
            IrrLabel("gu", "principal", (i, j))
            for i in range(q + 1)
            for j in range(i + 1, q + 1)
        ]
        out += [
            IrrLabel("gu", "cuspidal", (m,))
            for m in range(1, n)
            if m % (q - 1) and (-m * q) % n > m
        ]
        return tuple(out)

    def trivial_character(self) -> IrrLabel:
        return IrrLabel("gu", "linear", (0,))

    def degree(self, irr: IrrLabel) -> int:
        q = self.q
        return {"linear": 1, "steinberg": q, "principal": q - 1, "cuspidal": q + 1}[
            irr.kind
        ]

    def _torus_log(self, x: int) -> int:
        """Index of x in the norm-one subgroup E."""
        return self.tower.E_log[x]

    def char_value(self, irr: IrrLabel, cls: ClassLabel) -> CycSum:
        q, n = self.q, self.root_order
        tw = self.tower
        kind, ck = irr.kind, cls.kind
        elog = self._torus_log

        if kind in ("linear", "steinberg"):
            lam = MultChar(q + 1, irr.params[0])
            if ck in ("central", "jordan"):
                v = lam.at(2 * elog(cls.params[0]), n)
                if kind == "steinberg":
                    return v * q if ck == "central" else CycSum.zero(n)
                return v
            if ck == "split":
                x, y = cls.params
                v = lam.at(elog(x) + elog(y), n)
                return -v if kind == "steinberg" else v
            # eigenvalue pair {z, z^(-q)} multiplies to z^(1-q) in E
            dz = tw.ext.dlog(cls.params[0])
            v = lam.at(-dz, n)
            return v

        if kind == "principal":
            i, j = irr.params
            if ck in ("central", "jordan"):
                v = MultChar(q + 1, i + j).at(elog(cls.params[0]), n)
                return v * (q - 1) if ck == "central" else -v
            if ck == "split":
                ex, ey = elog(cls.params[0]), elog(cls.params[1])
                ci, cj = MultChar(q + 1, i), MultChar(q + 1, j)
                return -(ci.at(ex, n) * cj.at(ey, n) + ci.at(ey, n) * cj.at(ex, n))
            return CycSum.zero(n)

        # cuspidal, indexed by a character of F_{q^2}^x
        mu = MultChar(n, irr.params[0])
        ext = tw.ext
        if ck in ("central", "jordan"):
            v = mu(ext.dlog(cls.params[0]))
            return v * (q + 1) if ck == "central" else v
        if ck == "split":
            return CycSum.zero(n)
        dz = ext.dlog(cls.params[0])
        return mu(dz) + mu(-dz * q)


# ---------------------------------------------------------------------------


class SLGroup(_Family):
    """SL(2, q): determinant-one matrices over F_q, q an odd prime.

    The restriction to prime q keeps the half-degree character values
    exact: they are built from the quadratic residue periods of F_p.
    """

    family = "sl"

    def __init__(self, q: int):
        p, k = _prime_power(q)
        if p == 2:
            raise ValueError("only odd characteristic is supported")
        if k != 1:
            raise ValueError(
                "SL is supported for odd prime q only: the half-degree "
                "character values are built from quadratic residue periods "
                "of the prime field"
            )
        self.q, self.p, self.k = q, p, k
        self.tower = make_tower(p, 1)
        self.field = self.tower.base
        self.root_order = lcm(q * q - 1, p)
        self.order = q * (q * q - 1)
        eta0, eta1 = residue_periods(p)
        self._eta = (eta0.rescale_to(self.root_order), eta1.rescale_to(self.root_order))
        # the quadratic character of F_q^x evaluated at -1
        self._sign_m1 = 1 if ((q - 1) // 2) % 2 == 0 else -1
        self._classes = self._build_classes()
        self._irreducibles = self._build_irreducibles()

    # -- classes -----------------------------------------------------------------

    def _build_classes(self) -> tuple[ClassLabel, ...]:
        q, F, tw = self.q, self.field, self.tower
        minus = F.neg(1)
        out = [
            ClassLabel("sl", "central", (1,)),
            ClassLabel("sl", "central", (minus,)),
        ]
        out += [
            ClassLabel("sl", "jordan", (eps, c))
            for eps in (1, minus)
            for c in (1, tw.delta)
        ]
        for dx in range(1, (q - 1) // 2):
            out.append(ClassLabel("sl", "split", (F.exp[dx],)))
        for i in range(1, (q + 1) // 2):
            out.append(ClassLabel("sl", "nonsplit", (tw.E[i],)))
        return tuple(out)

    def class_size(self, label: ClassLabel) -> int:
        q = self.q
        return {
            "central": 1,
            "jordan": (q * q - 1) // 2,
            "split": q * (q + 1),
            "nonsplit": q * (q - 1),
        }[label.kind]

    def class_rep(self, label: ClassLabel) -> Mat2:
        F, tw = self.field, self.tower
        kind, params = label.kind, label.params
        if kind == "central":
            return mat_scalar(F, params[0])
        if kind == "jordan":
            eps, c = params
            return Mat2(eps, c, 0, eps)
        if kind == "split":
            x = params[0]
            return Mat2(x, 0, 0, F.inv(x))
        # z = x + y*sqrt(delta) in the norm-one torus acts as [[x, dy], [y, x]]
        z = params[0]
        ext, two = tw.ext, tw.embed(F.add(1, 1))
        zq = tw.conj(z)
        x = tw.project(ext.div(ext.add(z, zq), two))
        y = tw.project(ext.div(ext.sub(z, zq), ext.mul(two, tw.sqrt_delta)))
        return Mat2(x, F.mul(tw.delta, y), y, x)

    def classify(self, m: Mat2) -> ClassLabel:
        F, tw = self.field, self.tower
        if mat_det(F, m) != 1:
            raise ValueError("determinant is not 1")
        minus = F.neg(1)
        if m.b == 0 and m.c == 0 and m.a == m.d:
            return ClassLabel("sl", "central", (m.a,))
        t = mat_trace(F, m)
        two = F.add(1, 1)
        if t == two or t == F.neg(two):
            # the square class of b (or -c when b = 0) picks the Jordan class
            eps = 1 if t == two else minus
            x = m.b if m.b != 0 else F.neg(m.c)
            return ClassLabel("sl", "jordan", (eps, 1 if F.is_square(x) else tw.delta))
        disc = F.sub(F.mul(t, t), F.mul(two, two))
        s = F.sqrt(disc)
        if s is not None:
            r1 = F.div(F.add(t, s), two)
            r2 = F.inv(r1)
            x = r1 if F.log[r1] <= F.log[r2] else r2
            return ClassLabel("sl", "split", (x,))
        ext = tw.ext
        se = ext.sqrt(tw.embed(disc))
        z = ext.div(ext.add(tw.embed(t), se), tw.embed(two))
        zi = ext.inv(z)
        zc = z if ext.log[z] <= ext.log[zi] else zi
        return ClassLabel("sl", "nonsplit", (zc,))

    def enumerate_group(self) -> list[Mat2]:
        F, q = self.field, self.q
        out = []
        for a in range(q):
            for b in range(q):
                for c in range(q):
                    if a:
                        # d = (1 + bc) / a
                        out.append(Mat2(a, b, c, F.div(F.add(1, F.mul(b, c)), a)))
                    elif b:
                        if F.mul(b, c) == F.neg(1):
                            out.extend(Mat2(0, b, c, d) for d in range(q))
        return out

    # -- characters -----------------------------------------------------------------

    def _build_irreducibles(self) -> tuple[IrrLabel, ...]:
        q = self.q
        out = [IrrLabel("sl", "trivial", ()), IrrLabel("sl", "steinberg", ())]
        out += [IrrLabel("sl", "principal", (j,)) for j in range(1, (q - 1) // 2)]
        out += [IrrLabel("sl", "cuspidal", (m,)) for m in range(1, (q + 1) // 2)]
        out += [IrrLabel("sl", "principal_half", (s,)) for s in (1, -1)]
        out += [IrrLabel("sl", "cuspidal_half", (s,)) for s in (1, -1)]
        return tuple(out)

    def trivial_character(self) -> IrrLabel:
        return IrrLabel("sl", "trivial", ())

    def degree(self, irr: IrrLabel) -> int:
        q = self.q
        return {
            "trivial": 1,
            "steinberg": q,
            "principal": q + 1,
            "cuspidal": q - 1,
            "principal_half": (q + 1) // 2,
            "cuspidal_half": (q - 1) // 2,
        }[irr.kind]

    def char_value(self, irr: IrrLabel, cls: ClassLabel) -> CycSum:
        """Tabulated character values.

        For the half-degree characters only central and jordan classes
        are tabulated; use :meth:`char_value_full` for the rest.
        """
        if irr.kind.endswith("_half") and cls.kind in ("split", "nonsplit"):
            raise UntabulatedCharacterError(
                f"{irr.kind} characters are tabulated on central and jordan "
                f"classes only; char_value_full carries the derived values"
            )
        return self.char_value_full(irr, cls)

    def char_value_full(self, irr: IrrLabel, cls: ClassLabel) -> CycSum:
        """Character values including the orthogonality-derived entries.

        The half-degree values on split/nonsplit classes (zero, the
        quadratic character, or the order-2 torus character) are forced
        by orthogonality against the tabulated rows; the test suite
        verifies the resulting table is orthonormal.
        """
        q, n = self.q, self.root_order
        F, tw = self.field, self.tower
        kind, ck = irr.kind, cls.kind
        minus = F.neg(1)

        if kind == "trivial":
            return CycSum.from_int(n, 1)

        if kind == "steinberg":
            if ck == "central":
                return CycSum.from_int(n, q)
            if ck == "jordan":
                return CycSum.zero(n)
            return CycSum.from_int(n, 1 if ck == "split" else -1)

        if kind == "principal":
            j = irr.params[0]
            lam = MultChar(q - 1, j)
            if ck == "central":
                return lam.at(F.dlog(cls.params[0]), n) * (q + 1)
            if ck == "jordan":
                return lam.at(F.dlog(cls.params[0]), n)
            if ck == "split":
                dx = F.dlog(cls.params[0])
                return lam.at(dx, n) + lam.at(-dx, n)
            return CycSum.zero(n)

        if kind == "cuspidal":
            m = irr.params[0]
            mu = MultChar(q + 1, m)
            if ck == "central":
                e = tw.E_log[tw.embed(cls.params[0])]
                return mu.at(e, n) * (q - 1)
            if ck == "jordan":
                e = tw.E_log[tw.embed(cls.params[0])]
                return -mu.at(e, n)
            if ck == "split":
                return CycSum.zero(n)
            e = tw.E_log[cls.params[0]]
            return -(mu.at(e, n) + mu.at(-e, n))

        # half-degree characters: values on the four jordan classes are
        # (const +/- g)/2 for the quadratic Gauss sum g of F_q, with
        # const = 1 (principal), -1 (cuspidal) at eps = +1, and the
        # quadratic character at -1 for eps = -1.
        s = irr.params[0]
        if kind == "principal_half":
            if ck == "central":
                v = (q + 1) // 2
                return CycSum.from_int(n, v if cls.params[0] == 1 else self._sign_m1 * v)
            if ck == "jordan":
                eps, c = cls.params
                const = 1 if eps == 1 else self._sign_m1
                return self._half(const, s if c == 1 else -s)
            if ck == "split":
                # derived: the quadratic character of the eigenvalue
                return CycSum.from_int(n, 1 if F.dlog(cls.params[0]) % 2 == 0 else -1)
            return CycSum.zero(n)

        # cuspidal_half
        if ck == "central":
            v = (q - 1) // 2
            return CycSum.from_int(n, v if cls.params[0] == 1 else -self._sign_m1 * v)
        if ck == "jordan":
            eps, c = cls.params
            if eps == 1:
                return self._half(-1, s if c == 1 else -s)
            return self._half(self._sign_m1, -s if c == 1 else s)
        if ck == "split":
            return CycSum.zero(n)
        # derived: minus the order-2 character of the norm-one torus
        e = tw.E_log[cls.params[0]]
        return CycSum.from_int(n, -1 if e % 2 == 0 else 1)

    def _half(self, const: int, sgn: int) -> CycSum:
        """(const + sgn*g)/2 for the quadratic Gauss sum g; both in {1, -1}."""
        eta = self._eta[0] if sgn == 1 else self._eta[1]
        return eta + 1 if const == 1 else eta
