"""Finitely presented invariant double complexes.

A presentation declares 1-form generators carrying a bidegree, an underlying
coordinate letter, and a character-lattice weight, together with structure
images for the two differentials and a contraction table for frame vectors.
Basis monomials of A^{p,q} are wedge products of generators, identified by
(total weight, letter sets) and restricted to the declared weight classes.
The ambient wedge algebra is larger than the presented complex; operators of
the complex are validated to stay inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from .errors import PresentationError
from .scalars import GaussianRational, QI_ONE, QI_ZERO, parse_gaussian, parse_rational


class Monomial(NamedTuple):
    """Wedge monomial: total weight, ascending holo letter ids, ascending anti letter ids."""

    weight: tuple
    holo: tuple
    anti: tuple

    @property
    def bidegree(self):
        return (len(self.holo), len(self.anti))


@dataclass(frozen=True)
class Generator:
    name: str
    holo: bool
    letter: str
    weight: tuple
    conjugate: str
    norm2: Fraction


def _merge_sorted(a, b):
    """Merge two ascending tuples; returns (koszul sign, merged) or None on repeats."""
    out = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return None
        if a[i] < b[j]:
            out.append(a[i])
            i += 1
        else:
            # b[j] jumps past the remaining elements of a
            if (len(a) - i) % 2:
                sign = -sign
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return sign, tuple(out)


def _sort_with_sign(seq):
    """Sort a sequence of distinct ints, tracking permutation parity."""
    items = list(seq)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] > items[j]:
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(items)):
        if items[i - 1] == items[i]:
            return None
    return sign, tuple(items)


class FormVector:
    """Element of the (ambient) bigraded algebra: bidegree plus sparse monomial terms."""

    __slots__ = ("bidegree", "terms")

    def __init__(self, bidegree, terms=None):
        self.bidegree = tuple(bidegree)
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                if m.bidegree != self.bidegree:
                    raise ValueError(
                        "monomial bidegree %s in a (%d,%d) form"
                        % (m.bidegree, *self.bidegree)
                    )
                clean[m] = c
        self.terms = clean

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if other == 0:
            return self
        if self.bidegree != other.bidegree:
            raise ValueError("bidegree mismatch in form addition")
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return FormVector(self.bidegree, terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + other.scale(-QI_ONE)

    def scale(self, c):
        if not c:
            return FormVector(self.bidegree, {})
        return FormVector(self.bidegree, {m: c * x for m, x in self.terms.items()})

    def __neg__(self):
        return FormVector(self.bidegree, {m: -x for m, x in self.terms.items()})

    def __eq__(self, other):
        return (
            isinstance(other, FormVector)
            and self.bidegree == other.bidegree
            and self.terms == other.terms
        )

    def __repr__(self):
        return "FormVector(%r, %d terms)" % (self.bidegree, len(self.terms))


class ValidationReport:
    def __init__(self):
        self.checks = []
        self.failures = []
        self.star_closed = True

    def record(self, name, ok, detail=""):
        self.checks.append((name, ok, detail))
        if not ok:
            self.failures.append("%s: %s" % (name, detail) if detail else name)

    @property
    def ok(self):
        return not self.failures

    def summary_lines(self):
        out = []
        for name, ok, detail in self.checks:
            line = "%-34s %s" % (name, "ok" if ok else "FAIL")
            if detail and not ok:
                line += "  (%s)" % detail
            out.append(line)
        return out


class Presentation:
    """Validated finite double complex with weighted wedge-monomial bases."""

    def __init__(
        self,
        name,
        dimension,
        generators,
        d_structure,
        vectors,
        contraction,
        weight_conjugation=None,
        allowed_weights=None,
    ):
        self.name = name
        self.n = int(dimension)
        self.generators = list(generators)
        self.gen_by_name = {g.name: g for g in self.generators}
        if len(self.gen_by_name) != len(self.generators):
            raise PresentationError("duplicate generator names")

        holo_letters, anti_letters = [], []
        for g in self.generators:
            pool = holo_letters if g.holo else anti_letters
            if g.letter not in pool:
                pool.append(g.letter)
        # anti letters are indexed after holo letters so mixed tuples stay unambiguous
        self.holo_letters = holo_letters
        self.anti_letters = anti_letters
        self.letter_index = {name: i for i, name in enumerate(holo_letters)}
        self.letter_index.update(
            {name: i + len(holo_letters) for i, name in enumerate(anti_letters)}
        )
        if len(holo_letters) != self.n or len(anti_letters) != self.n:
            raise PresentationError(
                "expected %d holo and anti letters, got %d and %d"
                % (self.n, len(holo_letters), len(anti_letters))
            )

        rank = len(self.generators[0].weight) if self.generators else 0
        self.weight_rank = rank
        for g in self.generators:
            if len(g.weight) != rank:
                raise PresentationError("inconsistent weight vector lengths")
        self.zero_weight = (0,) * rank
        if weight_conjugation is None:
            weight_conjugation = list(range(rank))
        self.weight_conjugation = tuple(weight_conjugation)
        if sorted(self.weight_conjugation) != list(range(rank)):
            raise PresentationError("weight conjugation must be an index permutation")
        self.allowed_weights = (
            None if allowed_weights is None else {tuple(w) for w in allowed_weights}
        )
        if self.allowed_weights is not None and self.zero_weight not in self.allowed_weights:
            raise PresentationError("allowed weights must contain the zero weight")

        # letter-level conjugation induced by generator conjugation
        self.letter_conj = {}
        for g in self.generators:
            other = self.gen_by_name.get(g.conjugate)
            if other is None:
                raise PresentationError("missing conjugate generator %r" % g.conjugate)
            li, lo = self.letter_index[g.letter], self.letter_index[other.letter]
            if self.letter_conj.get(li, lo) != lo:
                raise PresentationError(
                    "generators sharing letter %r disagree on conjugate letter" % g.letter
                )
            self.letter_conj[li] = lo

        self.vectors = list(vectors)
        self.contraction = {}
        for vec, gen_name, scalar in contraction:
            if vec not in self.vectors:
                raise PresentationError("contraction entry for unknown vector %r" % vec)
            g = self.gen_by_name.get(gen_name)
            if g is None:
                raise PresentationError("contraction entry for unknown generator %r" % gen_name)
            li = self.letter_index[g.letter]
            table = self.contraction.setdefault(vec, {})
            if li in table and table[li] != scalar:
                raise PresentationError(
                    "contraction of %r on letter %r declared twice with different values"
                    % (vec, g.letter)
                )
            table[li] = scalar
        for vec in self.vectors:
            self.contraction.setdefault(vec, {})

        self._raw_d = d_structure
        self._basis_cache = {}
        self._decomp_cache = {}
        self._norm_cache = {}
        self._matrix_cache = {}
        self._images = None
        self._image_error = None

    # ----- monomial plumbing -------------------------------------------------

    def atom_monomial(self, gen):
        li = self.letter_index[gen.letter]
        if gen.holo:
            return Monomial(gen.weight, (li,), ())
        return Monomial(gen.weight, (), (li,))

    def weight_ok(self, w):
        if self.allowed_weights is None:
            return w == self.zero_weight
        return w in self.allowed_weights

    def conj_weight(self, w):
        return tuple(w[i] for i in self.weight_conjugation)

    def wedge_monomials(self, m1, m2):
        """(sign, monomial) for m1 wedge m2 in the ambient algebra, or None."""
        holo = _merge_sorted(m1.holo, m2.holo)
        if holo is None:
            return None
        anti = _merge_sorted(m1.anti, m2.anti)
        if anti is None:
            return None
        s1, holo_t = holo
        s2, anti_t = anti
        # m2's holo block crosses m1's anti block
        cross = -1 if (len(m1.anti) * len(m2.holo)) % 2 else 1
        w = tuple(a + b for a, b in zip(m1.weight, m2.weight))
        return s1 * s2 * cross, Monomial(w, holo_t, anti_t)

    def conj_monomial(self, m):
        """(sign, monomial) for complex conjugation."""
        p, q = m.bidegree
        new_holo = _sort_with_sign(self.letter_conj[j] for j in m.anti)
        new_anti = _sort_with_sign(self.letter_conj[i] for i in m.holo)
        if new_holo is None or new_anti is None:
            raise PresentationError("letter conjugation is not injective")
        sign = (-1 if (p * q) % 2 else 1) * new_holo[0] * new_anti[0]
        return sign, Monomial(self.conj_weight(m.weight), new_holo[1], new_anti[1])

    def monomial_str(self, m):
        holo = ",".join(self.holo_letters[i] for i in m.holo)
        anti = ",".join(self.anti_letters[i - self.n] for i in m.anti)
        body = "^".join(x for x in (holo, anti) if x) or "1"
        if self.weight_rank and any(m.weight):
            return "w%s·%s" % (list(m.weight), body)
        return body

    # ----- bases -------------------------------------------------------------

    def bidegrees(self):
        return [(p, q) for p in range(self.n + 1) for q in range(self.n + 1)]

    def basis(self, p, q):
        if not (0 <= p <= self.n and 0 <= q <= self.n):
            return []
        key = (p, q)
        if key not in self._basis_cache:
            self._build_basis(p, q)
        return self._basis_cache[key]

    def basis_index(self, p, q):
        if not (0 <= p <= self.n and 0 <= q <= self.n):
            return {}
        self.basis(p, q)
        return self._decomp_cache[(p, q)]["index"]

    def decompositions(self, mono):
        p, q = mono.bidegree
        self.basis(p, q)
        return self._decomp_cache[(p, q)]["decomps"][mono]

    def dim(self, p, q):
        if not (0 <= p <= self.n and 0 <= q <= self.n):
            return 0
        return len(self.basis(p, q))

    def _build_basis(self, p, q):
        holo_gens = [g for g in self.generators if g.holo]
        anti_gens = [g for g in self.generators if not g.holo]
        found = {}
        for hc in combinations(holo_gens, p):
            if len({g.letter for g in hc}) != p:
                continue
            for ac in combinations(anti_gens, q):
                if len({g.letter for g in ac}) != q:
                    continue
                w = self.zero_weight
                for g in hc + ac:
                    w = tuple(a + b for a, b in zip(w, g.weight))
                if not self.weight_ok(w):
                    continue
                holo_sorted = tuple(sorted(hc, key=lambda g: self.letter_index[g.letter]))
                anti_sorted = tuple(sorted(ac, key=lambda g: self.letter_index[g.letter]))
                mono = Monomial(
                    w,
                    tuple(self.letter_index[g.letter] for g in holo_sorted),
                    tuple(self.letter_index[g.letter] for g in anti_sorted),
                )
                found.setdefault(mono, []).append(holo_sorted + anti_sorted)
        ordered = sorted(found, key=lambda m: (m.weight, m.holo, m.anti))
        self._basis_cache[(p, q)] = ordered
        self._decomp_cache[(p, q)] = {
            "index": {m: i for i, m in enumerate(ordered)},
            "decomps": found,
        }

    def norm2(self, mono):
        if mono not in self._norm_cache:
            decomps = self.decompositions(mono)
            vals = set()
            for atoms in decomps:
                prod = Fraction(1)
                for g in atoms:
                    prod *= g.norm2
                vals.add(prod)
            if len(vals) != 1:
                raise PresentationError(
                    "inconsistent norms across decompositions of %s" % self.monomial_str(mono)
                )
            self._norm_cache[mono] = vals.pop()
        return self._norm_cache[mono]

    @property
    def top_monomial(self):
        basis = self.basis(self.n, self.n)
        target = Monomial(
            self.zero_weight,
            tuple(range(self.n)),
            tuple(range(self.n, 2 * self.n)),
        )
        if target not in self._decomp_cache[(self.n, self.n)]["index"]:
            raise PresentationError("weight-zero top monomial missing from the basis")
        return target

    # ----- differentials -----------------------------------------------------

    @property
    def d_images(self):
        if self._images is None and self._image_error is None:
            try:
                self._images = self._build_images()
            except PresentationError as exc:
                self._image_error = exc
        if self._image_error is not None:
            raise self._image_error
        return self._images

    def _build_images(self):
        """Parse generator structure images into per-generator FormVectors."""
        images = {}
        for g in self.generators:
            entry = self._raw_d.get(g.name, {"partial": [], "dbar": []})
            for kind in ("partial", "dbar"):
                fv_terms = {}
                dp, dq = (1, 0) if kind == "partial" else (0, 1)
                p0, q0 = (1, 0) if g.holo else (0, 1)
                target = (p0 + dp, q0 + dq)
                for term in entry.get(kind, ()):
                    coeff = parse_gaussian(term["coeff"])
                    names = term["monomial"]
                    if len(names) != 2:
                        raise PresentationError(
                            "structure image terms must be 2-generator monomials (generator %s)"
                            % g.name
                        )
                    mono = None
                    sign = QI_ONE
                    for nm in names:
                        if nm not in self.gen_by_name:
                            raise PresentationError("unknown generator %r in image of %s" % (nm, g.name))
                        atom = self.atom_monomial(self.gen_by_name[nm])
                        if mono is None:
                            mono = atom
                        else:
                            wm = self.wedge_monomials(mono, atom)
                            if wm is None:
                                raise PresentationError(
                                    "degenerate image monomial %r for generator %s" % (names, g.name)
                                )
                            s, mono = wm
                            sign = sign * s
                    if mono.bidegree != target:
                        raise PresentationError(
                            "image of %s has bidegree %s, expected %s (names %r)"
                            % (g.name, mono.bidegree, target, names)
                        )
                    if mono.weight != g.weight:
                        raise PresentationError(
                            "image of %s does not preserve its weight" % g.name
                        )
                    c = fv_terms.get(mono, QI_ZERO) + sign * coeff
                    if c:
                        fv_terms[mono] = c
                    else:
                        fv_terms.pop(mono, None)
                images[(g.name, kind)] = FormVector(target, fv_terms)
        return images

    def _leibniz(self, atoms, kind):
        """Graded Leibniz extension of the structure images over an atom list."""
        total = {}
        for i, atom in enumerate(atoms):
            img = self.d_images[(atom.name, kind)]
            if not img:
                continue
            prefix = None
            for a in atoms[:i]:
                am = self.atom_monomial(a)
                if prefix is None:
                    prefix = am
                else:
                    prefix = self.wedge_monomials(prefix, am)[1]
            suffix = None
            for a in atoms[i + 1 :]:
                am = self.atom_monomial(a)
                if suffix is None:
                    suffix = am
                else:
                    suffix = self.wedge_monomials(suffix, am)[1]
            sgn_i = -QI_ONE if i % 2 else QI_ONE
            for mono, coeff in img.terms.items():
                cur_sign = QI_ONE
                cur = mono
                if prefix is not None:
                    wm = self.wedge_monomials(prefix, cur)
                    if wm is None:
                        continue
                    s, cur = wm
                    cur_sign = cur_sign * s
                if suffix is not None:
                    wm = self.wedge_monomials(cur, suffix)
                    if wm is None:
                        continue
                    s, cur = wm
                    cur_sign = cur_sign * s
                c = total.get(cur, QI_ZERO) + sgn_i * cur_sign * coeff
                if c:
                    total[cur] = c
                else:
                    total.pop(cur, None)
        return total

    def d_monomial(self, mono, kind, check_consistency=False):
        """partial/dbar of a basis monomial, via its generator decomposition."""
        decomps = self.decompositions(mono)
        results = []
        for atoms in decomps if check_consistency else decomps[:1]:
            results.append(self._leibniz(atoms, kind))
        if check_consistency:
            for other in results[1:]:
                if other != results[0]:
                    raise PresentationError(
                        "decompositions of %s disagree under d" % self.monomial_str(mono)
                    )
        dp, dq = (1, 0) if kind == "partial" else (0, 1)
        p, q = mono.bidegree
        return FormVector((p + dp, q + dq), results[0])

    def matrix_of(self, kind, p, q):
        """Matrix of partial/dbar on A^{p,q} in the ordered bases."""
        key = (kind, p, q)
        if key in self._matrix_cache:
            return self._matrix_cache[key]
        dp, dq = (1, 0) if kind == "partial" else (0, 1)
        src = self.basis(p, q) if self.dim(p, q) else []
        tp, tq = p + dp, q + dq
        tgt_index = self.basis_index(tp, tq) if 0 <= tp <= self.n and 0 <= tq <= self.n else {}
        rows = len(tgt_index)
        mat = [[QI_ZERO] * len(src) for _ in range(rows)]
        for j, mono in enumerate(src):
            fv = self.d_monomial(mono, kind)
            for m, c in fv.terms.items():
                if m not in tgt_index:
                    raise PresentationError(
                        "%s image of %s leaves the presented complex at %s"
                        % (kind, self.monomial_str(mono), self.monomial_str(m))
                    )
                mat[tgt_index[m]][j] = c
        self._matrix_cache[key] = mat
        return mat

    # ----- form-level operations --------------------------------------------

    def wedge(self, a, b):
        p = (a.bidegree[0] + b.bidegree[0], a.bidegree[1] + b.bidegree[1])
        terms = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                wm = self.wedge_monomials(m1, m2)
                if wm is None:
                    continue
                s, m = wm
                c = terms.get(m, 0) + (c1 * c2 if s > 0 else -(c1 * c2))
                if c:
                    terms[m] = c
                else:
                    terms.pop(m, None)
        return FormVector(p, terms)

    def conjugate(self, a):
        p, q = a.bidegree
        terms = {}
        for m, c in a.terms.items():
            s, cm = self.conj_monomial(m)
            cc = c.conjugate()
            terms[cm] = cc if s > 0 else -cc
        return FormVector((q, p), terms)

    def contract(self, vector, a):
        if vector not in self.contraction:
            raise KeyError("unknown frame vector %r" % vector)
        table = self.contraction[vector]
        p, q = a.bidegree
        terms = {}
        for m, c in a.terms.items():
            for pos, letter in enumerate(m.holo):
                scalar = table.get(letter)
                if not scalar:
                    continue
                new = Monomial(m.weight, m.holo[:pos] + m.holo[pos + 1 :], m.anti)
                contrib = c * scalar if pos % 2 == 0 else -(c * scalar)
                s = terms.get(new, 0) + contrib
                if s:
                    terms[new] = s
                else:
                    terms.pop(new, None)
        return FormVector((p - 1, q), terms)

    def to_coords(self, fv, zero=QI_ZERO):
        index = self.basis_index(*fv.bidegree)
        vec = [zero] * len(index)
        for m, c in fv.terms.items():
            if m not in index:
                raise PresentationError(
                    "form leaves the presented complex at %s" % self.monomial_str(m)
                )
            vec[index[m]] = c
        return vec

    def from_coords(self, bidegree, coords):
        basis = self.basis(*bidegree)
        return FormVector(bidegree, {m: c for m, c in zip(basis, coords) if c})

    def basis_form(self, mono):
        return FormVector(mono.bidegree, {mono: QI_ONE})

    # ----- validation ---------------------------------------------------------

    def validate(self):
        report = ValidationReport()
        self._check_generators(report)
        self._check_structure_bidegrees(report)
        if report.ok:
            self._check_decomposition_consistency(report)
            self._check_d_squared(report)
            self._check_conj_compat(report)
            self._check_contraction(report)
            self._check_counts(report)
            self._check_star_closure(report)
        return report

    def _check_generators(self, report):
        ok, detail = True, ""
        for g in self.generators:
            other = self.gen_by_name.get(g.conjugate)
            if other is None or other.conjugate != g.name:
                ok, detail = False, "conjugation is not an involution at %s" % g.name
                break
            if other.holo == g.holo:
                ok, detail = False, "conjugate of %s has the same bidegree" % g.name
                break
            if other.weight != self.conj_weight(g.weight):
                ok, detail = False, "conjugate weight mismatch at %s" % g.name
                break
            if other.norm2 != g.norm2:
                ok, detail = False, "conjugate norm mismatch at %s" % g.name
                break
            if g.norm2 <= 0:
                ok, detail = False, "nonpositive norm at %s" % g.name
                break
        report.record("generator conjugation pairing", ok, detail)

    def _check_structure_bidegrees(self, report):
        try:
            self.d_images
        except PresentationError as exc:
            report.record("structure image bidegrees", False, str(exc))
            return
        report.record("structure image bidegrees", True)

    def _check_decomposition_consistency(self, report):
        ok, detail = True, ""
        try:
            for p, q in self.bidegrees():
                for mono in self.basis(p, q):
                    self.norm2(mono)
                    for kind in ("partial", "dbar"):
                        self.d_monomial(mono, kind, check_consistency=True)
        except PresentationError as exc:
            ok, detail = False, str(exc)
        report.record("decomposition consistency", ok, detail)

    def _check_d_squared(self, report):
        from . import linalg

        ok, detail = True, ""
        try:
            for p, q in self.bidegrees():
                dd = linalg.mat_mul(self.matrix_of("partial", p + 1, q), self.matrix_of("partial", p, q)) if p + 2 <= self.n else None
                if dd is not None and not linalg.mat_is_zero(dd):
                    ok, detail = False, "partial^2 != 0 on A^{%d,%d}" % (p, q)
                    break
                bb = linalg.mat_mul(self.matrix_of("dbar", p, q + 1), self.matrix_of("dbar", p, q)) if q + 2 <= self.n else None
                if bb is not None and not linalg.mat_is_zero(bb):
                    ok, detail = False, "dbar^2 != 0 on A^{%d,%d}" % (p, q)
                    break
                if p + 1 <= self.n and q + 1 <= self.n:
                    ab = linalg.mat_add(
                        linalg.mat_mul(self.matrix_of("partial", p, q + 1), self.matrix_of("dbar", p, q)),
                        linalg.mat_mul(self.matrix_of("dbar", p + 1, q), self.matrix_of("partial", p, q)),
                    )
                    if not linalg.mat_is_zero(ab):
                        ok, detail = False, "partial·dbar + dbar·partial != 0 on A^{%d,%d}" % (p, q)
                        break
        except PresentationError as exc:
            ok, detail = False, str(exc)
        report.record("d squared is zero", ok, detail)

    def _check_conj_compat(self, report):
        ok, detail = True, ""
        for p, q in self.bidegrees():
            for mono in self.basis(p, q):
                fv = self.basis_form(mono)
                lhs = self.conjugate(self.d_monomial(mono, "partial"))
                rhs_input = self.conjugate(fv)
                rhs = FormVector((q, p + 1), {})
                for m, c in rhs_input.terms.items():
                    rhs = rhs + self.d_monomial(m, "dbar").scale(c)
                if lhs != rhs:
                    ok, detail = False, "conj∘partial != dbar∘conj at %s" % self.monomial_str(mono)
                    break
            if not ok:
                break
        report.record("conjugation compatibility of d", ok, detail)

    def _check_contraction(self, report):
        ok, detail = True, ""
        monos = [m for pq in self.bidegrees() for m in self.basis(*pq)]
        for vec in self.vectors:
            for m1 in monos:
                if not ok:
                    break
                a = self.basis_form(m1)
                dega = sum(m1.bidegree)
                ia = self.contract(vec, a)
                for m2 in monos:
                    if sum(m2.bidegree) + dega > 2 * self.n:
                        continue
                    b = self.basis_form(m2)
                    ab = self.wedge(a, b)
                    lhs = self.contract(vec, ab)
                    rhs = self.wedge(ia, b) + (
                        self.wedge(a, self.contract(vec, b)).scale(-QI_ONE)
                        if dega % 2
                        else self.wedge(a, self.contract(vec, b))
                    )
                    if lhs != rhs:
                        ok = False
                        detail = "derivation law fails for %s on %s^%s" % (
                            vec,
                            self.monomial_str(m1),
                            self.monomial_str(m2),
                        )
                        break
            if not ok:
                break
        report.record("contraction is a graded derivation", ok, detail)

    def _check_counts(self, report):
        from math import comb

        if self.allowed_weights is None:
            ok = all(
                self.dim(p, q) == comb(self.n, p) * comb(self.n, q)
                for p, q in self.bidegrees()
            )
            report.record("weight-free basis cardinalities", ok)
        else:
            total = sum(self.dim(p, q) for p, q in self.bidegrees())
            report.record(
                "weighted basis built", total > 0, "total dimension %d" % total
            )

    def _check_star_closure(self, report):
        ok, detail = True, ""
        for p, q in self.bidegrees():
            for mono in self.basis(p, q):
                s, cm = self.conj_monomial(mono)
                holo_c = tuple(i for i in range(self.n) if i not in cm.holo)
                anti_c = tuple(
                    i for i in range(self.n, 2 * self.n) if i not in cm.anti
                )
                w = tuple(-x for x in cm.weight)
                dual = Monomial(w, holo_c, anti_c)
                if dual not in self.basis_index(*dual.bidegree):
                    ok = False
                    detail = "star dual of %s missing" % self.monomial_str(mono)
                    report.star_closed = False
                    break
            if not ok:
                break
        report.record("star closure of the presented complex", ok, detail)


def generators_from_json(data):
    gens = []
    for g in data:
        p, q = g["bidegree"]
        if (p, q) not in ((1, 0), (0, 1)):
            raise PresentationError("generator %s must have bidegree (1,0) or (0,1)" % g["name"])
        gens.append(
            Generator(
                name=g["name"],
                holo=(p, q) == (1, 0),
                letter=g.get("letter", g["name"]),
                weight=tuple(g.get("weight", ())),
                conjugate=g["conjugate"],
                norm2=parse_rational(g.get("norm", 1)),
            )
        )
    return gens


def presentation_from_json(data):
    gens = generators_from_json(data["generators"])
    d_structure = {
        entry["gen"]: {"partial": entry.get("partial", []), "dbar": entry.get("dbar", [])}
        for entry in data.get("d", [])
    }
    contraction = [
        (e["vector"], e["gen"], parse_gaussian(e["scalar"]))
        for e in data.get("contraction", [])
    ]
    return Presentation(
        name=data.get("name", "unnamed"),
        dimension=data["dimension"],
        generators=gens,
        d_structure=d_structure,
        vectors=data.get("vectors", []),
        contraction=contraction,
        weight_conjugation=data.get("weight_conjugation"),
        allowed_weights=data.get("allowed_weights"),
    )
