"""Finite-dimensional Hodge theory on a presented double complex.

The inner product is diagonal on basis monomials (product of generator norms).
The star operator is computed from the real Hodge star of the underlying
metric, expanded exactly over Q(i), and normalized by 2^(n-p-q) on A^{p,q} so
that the usual adjoint identities hold verbatim against Hermitian matrix
adjoints taken in the declared inner product.  Adjoints are *defined* as
Hermitian matrix adjoints; the star identities are verified as properties.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt

from . import linalg
from .errors import InternalInconsistencyError, PresentationError
from .presentation import FormVector, Monomial
from .scalars import GaussianRational, QI_I, QI_ONE, QI_ZERO

THEORIES = ("dolbeault", "bc", "aeppli")

SHIFTS = {
    "partial": (1, 0),
    "dbar": (0, 1),
    "partial_star": (-1, 0),
    "dbar_star": (0, -1),
    "ddbar": (1, 1),
    "ddbar_star": (-1, -1),
}


def frac_sqrt(fr):
    fr = Fraction(fr)
    if fr < 0:
        raise ValueError("negative value has no rational square root")
    rn, rd = isqrt(fr.numerator), isqrt(fr.denominator)
    if rn * rn != fr.numerator or rd * rd != fr.denominator:
        raise PresentationError("norm ratio %s is not a perfect rational square" % fr)
    return Fraction(rn, rd)


def _append_index(state, idx):
    """Wedge e_state ∧ e_idx; returns (sign, new_state) or None on a repeat."""
    if idx in state:
        return None
    crossings = sum(1 for s in state if s > idx)
    pos = len(state) - crossings
    new = state[:pos] + (idx,) + state[pos:]
    return (-1 if crossings % 2 else 1), new


def _expand_complex_monomial(n, holo, anti):
    """Expand φ^holo ∧ φbar^anti into real e-monomials (φ^j = e_2j + i e_2j+1)."""
    terms = {(): QI_ONE}
    factors = [(2 * j, QI_ONE, 2 * j + 1, QI_I) for j in holo]
    factors += [(2 * j, QI_ONE, 2 * j + 1, -QI_I) for j in anti]
    for i1, c1, i2, c2 in factors:
        new = {}
        for state, c in terms.items():
            for idx, f in ((i1, c1), (i2, c2)):
                appended = _append_index(state, idx)
                if appended is None:
                    continue
                sgn, ns = appended
                val = new.get(ns, QI_ZERO) + (c * f if sgn > 0 else -(c * f))
                if val:
                    new[ns] = val
                else:
                    new.pop(ns, None)
        terms = new
    return terms


def _real_star(n, state):
    """Real Hodge star on orthonormal e-monomials in dimension 2n."""
    comp = tuple(sorted(set(range(2 * n)) - set(state)))
    seq = state + comp
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return (-1 if inv % 2 else 1), comp


def _collapse_to_complex(n, real_terms):
    """Rewrite a real-monomial combination in the φ/φbar monomial basis."""
    out = {}
    for state, coeff in real_terms.items():
        branches = {((), ()): coeff}
        for idx in state:
            j, odd = divmod(idx, 2)
            if odd:
                choices = ((0, j, QI_I * GaussianRational(Fraction(-1, 2))),
                           (1, j, QI_I * GaussianRational(Fraction(1, 2))))
            else:
                half = GaussianRational(Fraction(1, 2))
                choices = ((0, j, half), (1, j, half))
            new = {}
            for (H, A), c in branches.items():
                for kind, slot, f in choices:
                    if kind == 0:
                        if slot in H:
                            continue
                        crossings = len(A) + sum(1 for h in H if h > slot)
                        H2 = tuple(sorted(H + (slot,)))
                        A2 = A
                    else:
                        if slot in A:
                            continue
                        crossings = sum(1 for a in A if a > slot)
                        H2 = H
                        A2 = tuple(sorted(A + (slot,)))
                    term = c * f if crossings % 2 == 0 else -(c * f)
                    val = new.get((H2, A2), QI_ZERO) + term
                    if val:
                        new[(H2, A2)] = val
                    else:
                        new.pop((H2, A2), None)
            branches = new
        for key, c in branches.items():
            val = out.get(key, QI_ZERO) + c
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return out


_STAR_TABLES = {}


def unit_star_table(n):
    """Star coefficients for unit-norm coframe monomials, by (holo, anti) slot sets.

    Maps (holo, anti) to the single coefficient of the dual monomial
    (complement(anti), complement(holo)), including the 2^(n-p-q) scaling.
    """
    if n in _STAR_TABLES:
        return _STAR_TABLES[n]
    table = {}
    slots = range(n)
    for p in range(n + 1):
        for holo in combinations(slots, p):
            for q in range(n + 1):
                for anti in combinations(slots, q):
                    expanded = _expand_complex_monomial(n, holo, anti)
                    starred = {}
                    for state, c in expanded.items():
                        sgn, comp = _real_star(n, state)
                        val = starred.get(comp, QI_ZERO) + (c if sgn > 0 else -c)
                        if val:
                            starred[comp] = val
                        else:
                            starred.pop(comp, None)
                    collapsed = _collapse_to_complex(n, starred)
                    expect = (
                        tuple(s for s in slots if s not in anti),
                        tuple(s for s in slots if s not in holo),
                    )
                    if list(collapsed) != [expect]:
                        raise InternalInconsistencyError(
                            "star of a coframe monomial is not a single dual monomial"
                        )
                    scale = Fraction(2) ** (n - p - q)
                    table[(holo, anti)] = collapsed[expect] * scale
    _STAR_TABLES[n] = table
    return table


@dataclass
class CohomologyGroup:
    theory: str
    bidegree: tuple
    dimension: int
    harmonic_basis: list


class HodgePackage:
    """Per-bidegree matrices: differentials, adjoints, star, Laplacians, Greens."""

    def __init__(self, pres):
        self.pres = pres
        self.n = pres.n
        self._cache = {}
        self._star_unit = unit_star_table(pres.n)

    # ----- grams and adjoints -------------------------------------------------

    def gram(self, p, q):
        key = ("gram", p, q)
        if key not in self._cache:
            self._cache[key] = [self.pres.norm2(m) for m in self.pres.basis(p, q)]
        return self._cache[key]

    def adjoint_of(self, mat, src, dst):
        """Hermitian adjoint of the operator mat: A^src -> A^dst.

        Returns the matrix of the adjoint A^dst -> A^src, sized
        dim(src) x dim(dst) even when mat is empty.
        """
        gs, gd = self.gram(*src), self.gram(*dst)
        out = [[QI_ZERO] * len(gd) for _ in range(len(gs))]
        for j, row in enumerate(mat):
            for i, entry in enumerate(row):
                if entry:
                    out[i][j] = entry.conjugate() * (gd[j] / gs[i])
        return out

    def inner_product(self, a, b):
        if a.bidegree != b.bidegree:
            raise ValueError("inner product requires equal bidegrees")
        total = QI_ZERO
        for m, c in a.terms.items():
            other = b.terms.get(m)
            if other:
                total = total + c * other.conjugate() * self.pres.norm2(m)
        return total

    # ----- star ----------------------------------------------------------------

    def star_monomial(self, mono):
        """(coefficient, dual monomial) of the star of a basis monomial."""
        n = self.n
        holo_slots = mono.holo
        anti_slots = tuple(a - n for a in mono.anti)
        coeff = self._star_unit[(holo_slots, anti_slots)]
        out_holo = tuple(s for s in range(n) if s not in anti_slots)
        out_anti = tuple(s + n for s in range(n) if s not in holo_slots)
        w = tuple(-x for x in self.pres.conj_weight(mono.weight))
        dual = Monomial(w, out_holo, out_anti)
        if dual not in self.pres.basis_index(*dual.bidegree):
            raise PresentationError(
                "star image of %s leaves the presented complex"
                % self.pres.monomial_str(mono)
            )
        ratio = frac_sqrt(self.pres.norm2(mono) / self.pres.norm2(dual))
        return coeff * ratio, dual

    def star(self, p, q):
        key = ("star", p, q)
        if key not in self._cache:
            src = self.pres.basis(p, q) if 0 <= p <= self.n and 0 <= q <= self.n else []
            tgt_index = self.pres.basis_index(self.n - q, self.n - p)
            mat = [[QI_ZERO] * len(src) for _ in range(len(tgt_index))]
            for j, mono in enumerate(src):
                c, dual = self.star_monomial(mono)
                mat[tgt_index[dual]][j] = c
            self._cache[key] = mat
        return self._cache[key]

    def hodge_star(self, fv):
        p, q = fv.bidegree
        terms = {}
        for m, c in fv.terms.items():
            coeff, dual = self.star_monomial(m)
            val = terms.get(dual, QI_ZERO) + c * coeff
            if val:
                terms[dual] = val
            else:
                terms.pop(dual, None)
        return FormVector((self.n - q, self.n - p), terms)

    def volume_form(self):
        return self.hodge_star(FormVector((0, 0), {Monomial(self.pres.zero_weight, (), ()): QI_ONE}))

    def conj_star(self, fv):
        """The duality map between the two families of harmonic spaces."""
        return self.pres.conjugate(self.hodge_star(fv))

    # ----- differential families ------------------------------------------------

    def mat(self, name, p, q):
        """Matrix of the named operator with source A^{p,q}."""
        key = (name, p, q)
        if key in self._cache:
            return self._cache[key]
        n = self.n
        dims = self.pres.dim
        if name == "partial":
            val = (
                self.pres.matrix_of("partial", p, q)
                if 0 <= p <= n and 0 <= q <= n and p + 1 <= n
                else linalg.zeros(dims(p + 1, q), dims(p, q))
            )
        elif name == "dbar":
            val = (
                self.pres.matrix_of("dbar", p, q)
                if 0 <= p <= n and 0 <= q <= n and q + 1 <= n
                else linalg.zeros(dims(p, q + 1), dims(p, q))
            )
        elif name == "partial_star":
            val = (
                self.adjoint_of(self.mat("partial", p - 1, q), (p - 1, q), (p, q))
                if p >= 1
                else linalg.zeros(dims(p - 1, q), dims(p, q))
            )
        elif name == "dbar_star":
            val = (
                self.adjoint_of(self.mat("dbar", p, q - 1), (p, q - 1), (p, q))
                if q >= 1
                else linalg.zeros(dims(p, q - 1), dims(p, q))
            )
        elif name == "ddbar":
            val = linalg.mat_mul_sized(
                self.mat("partial", p, q + 1),
                self.mat("dbar", p, q),
                dims(p + 1, q + 1),
                dims(p, q + 1),
                dims(p, q),
            )
        elif name == "ddbar_star":
            val = (
                self.adjoint_of(self.mat("ddbar", p - 1, q - 1), (p - 1, q - 1), (p, q))
                if p >= 1 and q >= 1
                else linalg.zeros(dims(p - 1, q - 1), dims(p, q))
            )
        else:
            raise KeyError("unknown operator family %r" % name)
        self._cache[key] = val
        return val

    def compose(self, names, p, q):
        """Matrix of the composition applying names left to right from A^{p,q}."""
        cur = (p, q)
        acc = None
        for nm in names:
            m = self.mat(nm, *cur)
            dp, dq = SHIFTS[nm]
            nxt = (cur[0] + dp, cur[1] + dq)
            if acc is None:
                acc = m
            else:
                acc = linalg.mat_mul_sized(
                    m, acc, self.pres.dim(*nxt), self.pres.dim(*cur), self.pres.dim(p, q)
                )
            cur = nxt
        if acc is None:
            acc = linalg.identity(self.pres.dim(p, q))
        return acc

    def target_bidegree(self, names, p, q):
        for nm in names:
            dp, dq = SHIFTS[nm]
            p, q = p + dp, q + dq
        return (p, q)

    def d_stack(self, p, q):
        """d = partial ⊕ dbar as a stacked matrix A^{p,q} -> A^{p+1,q} ⊕ A^{p,q+1}."""
        return self.mat("partial", p, q) + self.mat("dbar", p, q)

    def dstar_image_vectors(self, p, q):
        """Column vectors spanning im d* ∩ A^{p,q}."""
        cols = linalg.columns(self.mat("partial_star", p + 1, q)) + linalg.columns(
            self.mat("dbar_star", p, q + 1)
        )
        return cols

    # ----- Laplacians -----------------------------------------------------------

    def _sandwich(self, names, p, q, adjoint_first):
        """T*T (adjoint_first) or TT* for the composite T given by names from A^{p,q}."""
        if adjoint_first:
            T = self.compose(names, p, q)
            Tadj = self.adjoint_of(T, (p, q), self.target_bidegree(names, p, q))
            src = self.target_bidegree(names, p, q)
            return linalg.mat_mul_sized(
                Tadj, T, self.pres.dim(p, q), self.pres.dim(*src), self.pres.dim(p, q)
            )
        # TT*: T runs from the complementary source into (p,q)
        inv = [(-SHIFTS[nm][0], -SHIFTS[nm][1]) for nm in names]
        sp, sq = p, q
        for dp, dq in reversed(inv):
            sp, sq = sp + dp, sq + dq
        T = self.compose(names, sp, sq)
        Tadj = self.adjoint_of(T, (sp, sq), (p, q))
        return linalg.mat_mul_sized(
            T, Tadj, self.pres.dim(p, q), self.pres.dim(sp, sq), self.pres.dim(p, q)
        )

    def laplacian(self, theory, p, q):
        key = ("box", theory, p, q)
        if key in self._cache:
            return self._cache[key]
        dim = self.pres.dim(p, q)
        if theory == "dolbeault":
            terms = [
                self._sandwich(["dbar"], p, q, True),
                self._sandwich(["dbar"], p, q, False),
            ]
        elif theory == "bc":
            terms = [
                self._sandwich(["ddbar"], p, q, False),
                self._sandwich(["ddbar"], p, q, True),
                self._sandwich(["partial", "dbar_star"], p, q, True),
                self._sandwich(["partial", "dbar_star"], p, q, False),
                self._sandwich(["dbar"], p, q, True),
                self._sandwich(["partial"], p, q, True),
            ]
        elif theory == "aeppli":
            terms = [
                self._sandwich(["ddbar"], p, q, True),
                self._sandwich(["ddbar"], p, q, False),
                self._sandwich(["partial_star", "dbar"], p, q, True),
                self._sandwich(["partial_star", "dbar"], p, q, False),
                self._sandwich(["dbar"], p, q, False),
                self._sandwich(["partial"], p, q, False),
            ]
        else:
            raise KeyError("unknown theory %r" % theory)
        box = terms[0]
        for t in terms[1:]:
            box = linalg.mat_add(box, t)
        if linalg.shape(box) != (dim, dim) and dim:
            raise InternalInconsistencyError("Laplacian has wrong shape")
        self._cache[key] = box
        return box

    def harmonic_vectors(self, theory, p, q):
        key = ("harm", theory, p, q)
        if key not in self._cache:
            self._cache[key] = linalg.nullspace(self.laplacian(theory, p, q))
        return self._cache[key]

    def harmonic_basis(self, theory, p, q):
        return [self.pres.from_coords((p, q), v) for v in self.harmonic_vectors(theory, p, q)]

    def harmonic_projector(self, theory, p, q):
        key = ("proj", theory, p, q)
        if key in self._cache:
            return self._cache[key]
        dim = self.pres.dim(p, q)
        K = self.harmonic_vectors(theory, p, q)
        if not K:
            proj = linalg.zeros(dim, dim)
        else:
            Kmat = linalg.from_columns(K, dim)
            gram = self.gram(p, q)
            KH_M = [[Kmat[i][j].conjugate() * gram[i] for i in range(dim)] for j in range(len(K))]
            G = linalg.mat_mul(KH_M, Kmat)
            X = linalg.solve_matrix(G, KH_M)
            if X is None:
                raise InternalInconsistencyError("harmonic Gram matrix is singular")
            proj = linalg.mat_mul(Kmat, X)
        self._cache[key] = proj
        return proj

    def green(self, theory, p, q):
        """Green operator: zero on harmonics, inverse of the Laplacian on its image."""
        key = ("green", theory, p, q)
        if key in self._cache:
            return self._cache[key]
        dim = self.pres.dim(p, q)
        box = self.laplacian(theory, p, q)
        H = self.harmonic_projector(theory, p, q)
        R = linalg.column_space_basis(box)
        if not R:
            G = linalg.zeros(dim, dim)
        else:
            Rmat = linalg.from_columns(R, dim)
            BR = linalg.mat_mul(box, Rmat)
            target = linalg.mat_sub(linalg.identity(dim), H)
            C = linalg.solve_matrix(BR, target)
            if C is None:
                raise InternalInconsistencyError("Green operator solve failed")
            G = linalg.mat_mul(Rmat, C)
        self._cache[key] = G
        return G

    # ----- cohomology -----------------------------------------------------------

    def quotient_dimension(self, theory, p, q):
        """dim ker - dim im, with the containment im ⊆ ker asserted first."""
        dim = self.pres.dim(p, q)
        if theory == "dolbeault":
            ker_mat = self.mat("dbar", p, q)
            im_cols = linalg.columns(self.mat("dbar", p, q - 1))
        elif theory == "bc":
            ker_mat = self.d_stack(p, q)
            im_cols = linalg.columns(self.mat("ddbar", p - 1, q - 1))
        elif theory == "aeppli":
            ker_mat = self.mat("ddbar", p, q)
            im_cols = linalg.columns(self.mat("partial", p - 1, q)) + linalg.columns(
                self.mat("dbar", p, q - 1)
            )
        else:
            raise KeyError("unknown theory %r" % theory)
        for col in im_cols:
            if any(x for x in linalg.mat_vec(ker_mat, col)):
                raise InternalInconsistencyError(
                    "image is not contained in kernel for %s at (%d,%d)" % (theory, p, q)
                )
        ker_dim = dim - linalg.rank(ker_mat)
        im_dim = linalg.span_dim(im_cols, dim)
        return ker_dim - im_dim

    def cohomology(self, theory, p, q):
        harm = self.harmonic_vectors(theory, p, q)
        quot = self.quotient_dimension(theory, p, q)
        if len(harm) != quot:
            raise InternalInconsistencyError(
                "harmonic (%d) and quotient (%d) dimensions differ for %s at (%d,%d)"
                % (len(harm), quot, theory, p, q)
            )
        return CohomologyGroup(
            theory=theory,
            bidegree=(p, q),
            dimension=quot,
            harmonic_basis=self.harmonic_basis(theory, p, q),
        )

    def betti_table(self, theory):
        return {
            (p, q): self.cohomology(theory, p, q).dimension for p, q in self.pres.bidegrees()
        }

    # ----- property checks --------------------------------------------------------

    def check_green_identities(self):
        for theory in THEORIES:
            for p, q in self.pres.bidegrees():
                dim = self.pres.dim(p, q)
                box = self.laplacian(theory, p, q)
                H = self.harmonic_projector(theory, p, q)
                G = self.green(theory, p, q)
                lhs = linalg.mat_add(H, linalg.mat_mul(box, G))
                if not linalg.mat_eq(lhs, linalg.identity(dim)):
                    raise InternalInconsistencyError(
                        "1 != H + box·G for %s at (%d,%d)" % (theory, p, q)
                    )
                if not linalg.mat_is_zero(linalg.mat_mul(H, G)) or not linalg.mat_is_zero(
                    linalg.mat_mul(G, H)
                ):
                    raise InternalInconsistencyError("H·G != 0 for %s at (%d,%d)" % (theory, p, q))
                if not linalg.mat_eq(linalg.mat_mul(box, G), linalg.mat_mul(G, box)):
                    raise InternalInconsistencyError(
                        "G does not commute with its Laplacian for %s at (%d,%d)" % (theory, p, q)
                    )
        return True

    def kernel_characterization_vectors(self, theory, p, q):
        """Kernel of the two-condition characterization of the harmonic space."""
        if theory == "bc":
            stacked = self.d_stack(p, q) + self.mat("ddbar_star", p, q)
        elif theory == "aeppli":
            stacked = (
                self.mat("ddbar", p, q)
                + self.mat("partial_star", p, q)
                + self.mat("dbar_star", p, q)
            )
        elif theory == "dolbeault":
            stacked = self.mat("dbar", p, q) + self.mat("dbar_star", p, q)
        else:
            raise KeyError(theory)
        return linalg.nullspace(stacked, cols=self.pres.dim(p, q))

    def check_kernel_characterizations(self):
        for theory in THEORIES:
            for p, q in self.pres.bidegrees():
                dim = self.pres.dim(p, q)
                K1 = self.harmonic_vectors(theory, p, q)
                K2 = self.kernel_characterization_vectors(theory, p, q)
                if len(K1) != len(K2) or linalg.span_dim(K1 + K2, dim) != len(K1):
                    raise InternalInconsistencyError(
                        "Laplacian kernel differs from its characterization for %s at (%d,%d)"
                        % (theory, p, q)
                    )
        return True

    def star_sandwich(self, name, p, q):
        """star ∘ name ∘ star as a matrix on A^{p,q}."""
        n = self.n
        dp, dq = SHIFTS[name]
        mid = (n - q, n - p)
        mid2 = (mid[0] + dp, mid[1] + dq)
        out = (n - mid2[1], n - mid2[0])
        dims = self.pres.dim
        first = linalg.mat_mul_sized(
            self.mat(name, *mid), self.star(p, q), dims(*mid2), dims(*mid), dims(p, q)
        )
        return linalg.mat_mul_sized(
            self.star(*mid2), first, dims(*out), dims(*mid2), dims(p, q)
        )

    def check_star_identities(self):
        n = self.n
        for p, q in self.pres.bidegrees():
            dim = self.pres.dim(p, q)
            ss = linalg.mat_mul_sized(
                self.star(n - q, n - p),
                self.star(p, q),
                dim,
                self.pres.dim(n - q, n - p),
                dim,
            )
            expect = linalg.identity(dim)
            if (p + q) % 2:
                expect = linalg.mat_neg(expect)
            if not linalg.mat_eq(ss, expect):
                raise InternalInconsistencyError("star² has wrong sign at (%d,%d)" % (p, q))
            rhs = linalg.mat_neg(self.star_sandwich("dbar", p, q))
            if not linalg.mat_eq(self.mat("partial_star", p, q), rhs):
                raise InternalInconsistencyError("partial* != -*dbar* at (%d,%d)" % (p, q))
            rhs = linalg.mat_neg(self.star_sandwich("partial", p, q))
            if not linalg.mat_eq(self.mat("dbar_star", p, q), rhs):
                raise InternalInconsistencyError("dbar* != -*partial* at (%d,%d)" % (p, q))
            rhs = self.star_sandwich("ddbar", p, q)
            if (p + q) % 2 == 0:
                rhs = linalg.mat_neg(rhs)
            if not linalg.mat_eq(self.mat("ddbar_star", p, q), rhs):
                raise InternalInconsistencyError("(ddbar)* star formula fails at (%d,%d)" % (p, q))
        return True

    def check_star_pairing(self):
        """a ∧ *(conj b) has invariant top part <a,b>·vol, on all basis pairs."""
        top = self.pres.top_monomial
        vol = self.volume_form()
        vol_coeff = vol.terms[top]
        for p, q in self.pres.bidegrees():
            basis = self.pres.basis(p, q)
            for ma in basis:
                a = self.pres.basis_form(ma)
                for mb in basis:
                    b = self.pres.basis_form(mb)
                    prod = self.pres.wedge(a, self.hodge_star(self.pres.conjugate(b)))
                    got = prod.terms.get(top, QI_ZERO)
                    want = self.inner_product(a, b) * vol_coeff
                    if got != want:
                        raise InternalInconsistencyError(
                            "star pairing fails at (%d,%d)" % (p, q)
                        )
        return True

    def check_duality(self):
        """conj∘star maps BC-harmonics onto Aeppli-harmonics of complementary bidegree."""
        n = self.n
        for p, q in self.pres.bidegrees():
            bc = self.harmonic_basis("bc", p, q)
            target = self.harmonic_vectors("aeppli", n - p, n - q)
            dim_t = self.pres.dim(n - p, n - q)
            images = [self.pres.to_coords(self.conj_star(fv)) for fv in bc]
            if len(bc) != len(target):
                raise InternalInconsistencyError(
                    "h_BC(%d,%d) != h_A(%d,%d)" % (p, q, n - p, n - q)
                )
            if images and linalg.span_dim(images + target, dim_t) != len(target):
                raise InternalInconsistencyError(
                    "conj∘star does not map BC-harmonics onto Aeppli-harmonics at (%d,%d)"
                    % (p, q)
                )
            if linalg.span_dim(images, dim_t) != len(images):
                raise InternalInconsistencyError(
                    "conj∘star is not injective on BC-harmonics at (%d,%d)" % (p, q)
                )
        return True

    def check_aeppli_three_way_orthogonality(self):
        """ker box_A ⊕ im (ddbar)* ⊕ (im partial + im dbar), pairwise orthogonal."""
        for p, q in self.pres.bidegrees():
            dim = self.pres.dim(p, q)
            harm = self.harmonic_vectors("aeppli", p, q)
            dd = linalg.column_space_basis(self.mat("ddbar_star", p + 1, q + 1))
            ex = linalg.column_space_basis(
                linalg.from_columns(
                    linalg.columns(self.mat("partial", p - 1, q))
                    + linalg.columns(self.mat("dbar", p, q - 1)),
                    dim,
                )
            )
            if linalg.sum_span_dim([harm, dd, ex], dim) != dim or (
                len(harm) + len(dd) + len(ex) != dim
            ):
                raise InternalInconsistencyError(
                    "Aeppli decomposition is not a direct sum at (%d,%d)" % (p, q)
                )
            gram = self.gram(p, q)
            for fam1, fam2 in ((harm, dd), (harm, ex), (dd, ex)):
                for u in fam1:
                    for v in fam2:
                        s = QI_ZERO
                        for x, y, g in zip(u, v, gram):
                            if x and y:
                                s = s + x * y.conjugate() * g
                        if s:
                            raise InternalInconsistencyError(
                                "Aeppli decomposition pieces are not orthogonal at (%d,%d)"
                                % (p, q)
                            )
        return True
