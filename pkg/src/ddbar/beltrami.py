"""Beltrami families and the operators they induce.

A family is a finite sum of terms  m(t) · θ ⊗ β  with m a parameter monomial
of degree >= 1, θ a declared frame vector and β a (0,1)-generator.  The
contraction convention is  i_{θβ}(α) = β ∧ i_θ(α), and the (1,0)-Lie
derivative is  i_φ∂ − ∂i_φ; signs follow from these two choices everywhere.

The Maurer-Cartan equation is never checked on a separate bracket structure:
it is equivalent to the operator identity  dbar∘L + L∘dbar = L∘L  on the
complex (i.e. to dbar_φ² = 0), which is what all downstream computations use.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .errors import InternalInconsistencyError, PresentationError
from .presentation import FormVector, Monomial
from .scalars import GaussianRational, PolyRing, QI_ONE, QI_ZERO, parse_gaussian

HALF = GaussianRational(Fraction(1, 2))


class BeltramiFamily:
    def __init__(self, pres, params, terms, order=10):
        self.pres = pres
        self.ring = PolyRing(params, order)
        self.terms = []
        for coeff, exponents, vector, form in terms:
            mono = self.ring.monomial(exponents, parse_gaussian(coeff))
            if not mono:
                continue
            if mono.degree() < 1:
                raise PresentationError("Beltrami terms must vanish at t = 0")
            if vector not in pres.vectors:
                raise PresentationError("Beltrami term uses unknown vector %r" % vector)
            gen = pres.gen_by_name.get(form)
            if gen is None or gen.holo:
                raise PresentationError("Beltrami term needs a (0,1)-generator, got %r" % form)
            self.terms.append((mono, vector, form))
        self.max_degree = max((m.degree() for m, _, _ in self.terms), default=0)
        self._term_mats = {}
        self._cache = {}

    @classmethod
    def from_json(cls, pres, data, order=10):
        terms = [
            (t.get("coeff", "1"), t.get("exponents", {}), t["vector"], t["form"])
            for t in data.get("terms", [])
        ]
        return cls(pres, data["params"], terms, order=order)

    # ----- constant building blocks -------------------------------------------

    def _contract_wedge_matrix(self, vector, form, p, q):
        """Constant matrix of α ↦ β ∧ i_θ(α) : A^{p,q} -> A^{p-1,q+1}."""
        key = (vector, form, p, q)
        if key not in self._term_mats:
            pres = self.pres
            beta = pres.basis_form(pres.atom_monomial(pres.gen_by_name[form]))
            src = pres.basis(p, q)
            tgt_index = pres.basis_index(p - 1, q + 1)
            mat = [[QI_ZERO] * len(src) for _ in range(len(tgt_index))]
            for j, mono in enumerate(src):
                fv = pres.wedge(beta, pres.contract(vector, pres.basis_form(mono)))
                for m, c in fv.terms.items():
                    if m not in tgt_index:
                        raise PresentationError(
                            "Beltrami contraction leaves the complex at %s"
                            % pres.monomial_str(m)
                        )
                    mat[tgt_index[m]][j] = c
            self._term_mats[key] = mat
        return self._term_mats[key]

    def _lift(self, mat):
        return [[self.ring.const(x) for x in row] for row in mat]

    def _zeros(self, rows, cols):
        z = self.ring.zero()
        return [[z for _ in range(cols)] for _ in range(rows)]

    def _mm(self, a, b, rows, mid, cols):
        return linalg.mat_mul_sized(a, b, rows, mid, cols, zero=self.ring.zero())

    def _madd(self, a, b):
        return linalg.mat_add(a, b)

    # ----- polynomial operator families ----------------------------------------

    def i_phi(self, p, q, order=None):
        """ParamPoly matrix of i_φ (or of its degree-`order` piece) on A^{p,q}."""
        key = ("i", p, q, order)
        if key in self._cache:
            return self._cache[key]
        dims = self.pres.dim
        out = self._zeros(dims(p - 1, q + 1), dims(p, q))
        for mono, vector, form in self.terms:
            if order is not None and mono.degree() != order:
                continue
            mat = self._contract_wedge_matrix(vector, form, p, q)
            for i, row in enumerate(mat):
                for j, x in enumerate(row):
                    if x:
                        out[i][j] = out[i][j] + mono * x
        self._cache[key] = out
        return out

    def partial_poly(self, p, q):
        key = ("p", p, q)
        if key not in self._cache:
            dims = self.pres.dim
            if 0 <= p <= self.pres.n and 0 <= q <= self.pres.n and p + 1 <= self.pres.n:
                mat = self._lift(self.pres.matrix_of("partial", p, q))
            else:
                mat = self._zeros(dims(p + 1, q), dims(p, q))
            self._cache[key] = mat
        return self._cache[key]

    def dbar_poly(self, p, q):
        key = ("b", p, q)
        if key not in self._cache:
            dims = self.pres.dim
            if 0 <= p <= self.pres.n and 0 <= q <= self.pres.n and q + 1 <= self.pres.n:
                mat = self._lift(self.pres.matrix_of("dbar", p, q))
            else:
                mat = self._zeros(dims(p, q + 1), dims(p, q))
            self._cache[key] = mat
        return self._cache[key]

    def lie(self, p, q, order=None):
        """L^{1,0}_φ = i_φ∂ − ∂i_φ : A^{p,q} -> A^{p,q+1}."""
        key = ("L", p, q, order)
        if key in self._cache:
            return self._cache[key]
        dims = self.pres.dim
        first = self._mm(
            self.i_phi(p + 1, q, order), self.partial_poly(p, q), dims(p, q + 1), dims(p + 1, q), dims(p, q)
        )
        second = self._mm(
            self.partial_poly(p - 1, q + 1), self.i_phi(p, q, order), dims(p, q + 1), dims(p - 1, q + 1), dims(p, q)
        )
        out = linalg.mat_sub(first, second)
        self._cache[key] = out
        return out

    def dbar_phi(self, p, q):
        key = ("bphi", p, q)
        if key not in self._cache:
            self._cache[key] = linalg.mat_sub(self.dbar_poly(p, q), self.lie(p, q))
        return self._cache[key]

    def ddbar_phi(self, p, q):
        key = ("pbphi", p, q)
        if key not in self._cache:
            dims = self.pres.dim
            self._cache[key] = self._mm(
                self.partial_poly(p, q + 1),
                self.dbar_phi(p, q),
                dims(p + 1, q + 1),
                dims(p, q + 1),
                dims(p, q),
            )
        return self._cache[key]

    def d_phi_stack(self, p, q):
        return self.partial_poly(p, q) + self.dbar_phi(p, q)

    # ----- structural checks -----------------------------------------------------

    def maurer_cartan_failures(self):
        """Orders k at which dbar_φ² fails to vanish, per bidegree (empty = MC holds)."""
        if self.ring.order < 2 * self.max_degree:
            raise PresentationError(
                "truncation order %d too small to certify Maurer-Cartan (need %d)"
                % (self.ring.order, 2 * self.max_degree)
            )
        failures = {}
        dims = self.pres.dim
        for p, q in self.pres.bidegrees():
            sq = self._mm(
                self.dbar_phi(p, q + 1), self.dbar_phi(p, q), dims(p, q + 2), dims(p, q + 1), dims(p, q)
            )
            bad = sorted(
                {sum(e) for row in sq for x in row for e in x.terms}
            )
            if bad:
                failures[(p, q)] = bad
        return failures

    def check_maurer_cartan(self):
        failures = self.maurer_cartan_failures()
        if failures:
            (p, q), orders = sorted(failures.items())[0]
            raise PresentationError(
                "Maurer-Cartan fails at order %d (dbar_φ² ≠ 0 on A^{%d,%d})"
                % (orders[0], p, q)
            )
        return True

    def nilpotency_checks(self):
        """dbar_φ² = 0, d_φ² = 0 and ∂∂̄_φ = −∂̄_φ∂ as ParamPoly identities."""
        self.check_maurer_cartan()
        dims = self.pres.dim
        for p, q in self.pres.bidegrees():
            pp = self._mm(
                self.partial_poly(p + 1, q), self.partial_poly(p, q), dims(p + 2, q), dims(p + 1, q), dims(p, q)
            )
            if not linalg.mat_is_zero(pp):
                raise InternalInconsistencyError("partial² != 0")
            cross = self._madd(
                self._mm(
                    self.partial_poly(p, q + 1), self.dbar_phi(p, q), dims(p + 1, q + 1), dims(p, q + 1), dims(p, q)
                ),
                self._mm(
                    self.dbar_phi(p + 1, q), self.partial_poly(p, q), dims(p + 1, q + 1), dims(p + 1, q), dims(p, q)
                ),
            )
            if not linalg.mat_is_zero(cross):
                raise InternalInconsistencyError(
                    "∂∂̄_φ != −∂̄_φ∂ on A^{%d,%d}" % (p, q)
                )
        return True

    def cartan_identity_report(self):
        """Per-order check of the contraction/differential exchange identity."""
        dims = self.pres.dim
        report = {}
        orders = sorted({m.degree() for m, _, _ in self.terms})
        max_order = max(orders, default=0)
        for j in range(1, max_order + 1):
            ok = True
            for p, q in self.pres.bidegrees():
                lhs = self._mm(
                    self.i_phi(p, q + 1, j), self.dbar_poly(p, q), dims(p - 1, q + 2), dims(p, q + 1), dims(p, q)
                )
                rhs = self._mm(
                    self.dbar_poly(p - 1, q + 1), self.i_phi(p, q, j), dims(p - 1, q + 2), dims(p - 1, q + 1), dims(p, q)
                )
                for l in range(1, j):
                    m = j - l
                    t1 = self._mm(
                        self.i_phi(p, q + 1, l),
                        self._mm(
                            self.partial_poly(p - 1, q + 1), self.i_phi(p, q, m), dims(p, q + 1), dims(p - 1, q + 1), dims(p, q)
                        ),
                        dims(p - 1, q + 2),
                        dims(p, q + 1),
                        dims(p, q),
                    )
                    rhs = linalg.mat_sub(rhs, t1)
                    t2 = self._mm(
                        self.partial_poly(p - 2, q + 2),
                        self._mm(
                            self.i_phi(p - 1, q + 1, l), self.i_phi(p, q, m), dims(p - 2, q + 2), dims(p - 1, q + 1), dims(p, q)
                        ),
                        dims(p - 1, q + 2),
                        dims(p - 2, q + 2),
                        dims(p, q),
                    )
                    t3 = self._mm(
                        self.i_phi(p, q + 1, m),
                        self._mm(
                            self.i_phi(p + 1, q, l), self.partial_poly(p, q), dims(p, q + 1), dims(p + 1, q), dims(p, q)
                        ),
                        dims(p - 1, q + 2),
                        dims(p, q + 1),
                        dims(p, q),
                    )
                    rhs = self._madd(rhs, linalg.mat_scale(HALF, self._madd(t2, t3)))
                if not linalg.mat_is_zero(linalg.mat_sub(lhs, rhs)):
                    ok = False
                    break
            report[j] = ok
        return report

    # ----- evaluation at a parameter point ----------------------------------------

    def at_point(self, pkg, point):
        return PointOperators(self, pkg, point)


class PointOperators:
    """All deformed operators, evaluated at one Gaussian-rational parameter point.

    Conjugate-family operators (contraction against the conjugated Beltrami
    data) are built directly at the point, so adjoints stay exact.
    """

    def __init__(self, family, pkg, point):
        self.family = family
        self.pkg = pkg
        self.pres = family.pres
        self.point = {k: parse_gaussian(v) for k, v in point.items()}
        for p in family.ring.params:
            if p not in self.point:
                raise KeyError("point does not assign parameter %r" % p)
        self._cache = {}

    def _ev(self, poly_mat):
        return [[x.eval(self.point) for x in row] for row in poly_mat]

    def mat(self, name, p, q):
        key = (name, p, q)
        if key in self._cache:
            return self._cache[key]
        fam, pkg, pres = self.family, self.pkg, self.pres
        dims = pres.dim
        if name == "i_phi":
            val = self._ev(fam.i_phi(p, q))
        elif name == "lie":
            val = self._ev(fam.lie(p, q))
        elif name == "dbar_phi":
            val = self._ev(fam.dbar_phi(p, q))
        elif name == "ddbar_phi":
            val = self._ev(fam.ddbar_phi(p, q))
        elif name == "partial":
            val = pkg.mat("partial", p, q)
        elif name == "i_phibar":
            val = self._conj_contraction(p, q)
        elif name == "lie01":
            # L^{0,1}_{φ̄} = i_{φ̄} dbar − dbar i_{φ̄} : A^{p,q} -> A^{p+1,q}
            first = linalg.mat_mul_sized(
                self.mat("i_phibar", p, q + 1), pkg.mat("dbar", p, q), dims(p + 1, q), dims(p, q + 1), dims(p, q)
            )
            second = linalg.mat_mul_sized(
                pkg.mat("dbar", p + 1, q - 1), self.mat("i_phibar", p, q), dims(p + 1, q), dims(p + 1, q - 1), dims(p, q)
            )
            val = linalg.mat_sub(first, second)
        elif name == "partial_phibar":
            val = linalg.mat_sub(pkg.mat("partial", p, q), self.mat("lie01", p, q))
        elif name == "dbar_phi_star":
            val = pkg.adjoint_of(self.mat("dbar_phi", p, q - 1), (p, q - 1), (p, q))
        elif name == "ddbar_phi_star":
            val = pkg.adjoint_of(self.mat("ddbar_phi", p - 1, q - 1), (p - 1, q - 1), (p, q))
        elif name == "i_phi_star":
            val = pkg.adjoint_of(self.mat("i_phi", p + 1, q - 1), (p + 1, q - 1), (p, q))
        elif name == "lie_star":
            val = pkg.adjoint_of(self.mat("lie", p, q - 1), (p, q - 1), (p, q))
        else:
            raise KeyError("unknown point operator %r" % name)
        self._cache[key] = val
        return val

    def _conj_contraction(self, p, q):
        """i_{φ̄} : A^{p,q} -> A^{p+1,q-1} at the point."""
        pres = self.pres
        dims = pres.dim
        out = [[QI_ZERO] * dims(p, q) for _ in range(dims(p + 1, q - 1))]
        src = pres.basis(p, q)
        tgt_index = pres.basis_index(p + 1, q - 1)
        for mono_poly, vector, form in self.family.terms:
            c = mono_poly.eval(self.point).conjugate()
            if not c:
                continue
            conj_gen = pres.gen_by_name[pres.gen_by_name[form].conjugate]
            beta_bar = pres.basis_form(pres.atom_monomial(conj_gen))
            for j, mono in enumerate(src):
                fv = pres.wedge(beta_bar, self._contract_anti(vector, pres.basis_form(mono)))
                for m, coeff in fv.terms.items():
                    if m not in tgt_index:
                        raise PresentationError(
                            "conjugate contraction leaves the complex at %s"
                            % pres.monomial_str(m)
                        )
                    out[tgt_index[m]][j] = out[tgt_index[m]][j] + c * coeff
        return out

    def _contract_anti(self, vector, fv):
        """Contraction of the conjugated frame vector: acts on anti letters."""
        pres = self.pres
        table = pres.contraction[vector]
        p, q = fv.bidegree
        terms = {}
        for m, c in fv.terms.items():
            for pos, letter in enumerate(m.anti):
                holo_letter = pres.letter_conj[letter]
                scalar = table.get(holo_letter)
                if not scalar:
                    continue
                new = Monomial(m.weight, m.holo, m.anti[:pos] + m.anti[pos + 1 :])
                sign_exp = len(m.holo) + pos
                contrib = c * scalar.conjugate()
                if sign_exp % 2:
                    contrib = -contrib
                s = terms.get(new, 0) + contrib
                if s:
                    terms[new] = s
                else:
                    terms.pop(new, None)
        return FormVector((p, q - 1), terms)

    def d_phi_stack(self, p, q):
        return self.mat("partial", p, q) + self.mat("dbar_phi", p, q)

    def check_nilpotent(self):
        dims = self.pres.dim
        for p, q in self.pres.bidegrees():
            sq = linalg.mat_mul_sized(
                self.mat("dbar_phi", p, q + 1),
                self.mat("dbar_phi", p, q),
                dims(p, q + 2),
                dims(p, q + 1),
                dims(p, q),
            )
            if not linalg.mat_is_zero(sq):
                raise InternalInconsistencyError(
                    "dbar_φ² != 0 at the point on A^{%d,%d}" % (p, q)
                )
        return True

    def check_adjoint_star_formulas(self):
        """The four adjoint formulas, star side vs Hermitian side, all bidegrees."""
        pkg, pres = self.pkg, self.pres
        n = pres.n
        dims = pres.dim

        def sandwich(name, p, q, out_shift):
            mid = (n - q, n - p)
            mid2 = (mid[0] + out_shift[0], mid[1] + out_shift[1])
            out = (n - mid2[1], n - mid2[0])
            first = linalg.mat_mul_sized(
                self.mat(name, *mid), pkg.star(p, q), dims(*mid2), dims(*mid), dims(p, q)
            )
            return linalg.mat_mul_sized(
                pkg.star(*mid2), first, dims(*out), dims(*mid2), dims(p, q)
            )

        for p, q in pres.bidegrees():
            sgn = QI_ONE if (p + q + 1) % 2 == 0 else -QI_ONE
            lhs = self.mat("i_phi_star", p, q)
            rhs = linalg.mat_scale(sgn, sandwich("i_phibar", p, q, (1, -1)))
            if not linalg.mat_eq(lhs, rhs):
                raise InternalInconsistencyError("i_φ* star formula fails at (%d,%d)" % (p, q))
            lhs = self.mat("lie_star", p, q)
            rhs = linalg.mat_neg(sandwich("lie01", p, q, (1, 0)))
            if not linalg.mat_eq(lhs, rhs):
                raise InternalInconsistencyError("L_φ* star formula fails at (%d,%d)" % (p, q))
            lhs = self.mat("dbar_phi_star", p, q)
            rhs = linalg.mat_neg(sandwich("partial_phibar", p, q, (1, 0)))
            if not linalg.mat_eq(lhs, rhs):
                raise InternalInconsistencyError("dbar_φ* star formula fails at (%d,%d)" % (p, q))
            # (∂ dbar_φ)* = (-1)^{p+q+1} * (∂_{φ̄} dbar) *
            mid = (n - q, n - p)
            mid2 = (mid[0], mid[1] + 1)
            mid3 = (mid[0] + 1, mid[1] + 1)
            out = (n - mid3[1], n - mid3[0])
            inner = linalg.mat_mul_sized(
                pkg.mat("dbar", *mid), pkg.star(p, q), dims(*mid2), dims(*mid), dims(p, q)
            )
            inner = linalg.mat_mul_sized(
                self.mat("partial_phibar", *mid2), inner, dims(*mid3), dims(*mid2), dims(p, q)
            )
            rhs = linalg.mat_mul_sized(
                pkg.star(*mid3), inner, dims(*out), dims(*mid3), dims(p, q)
            )
            rhs = linalg.mat_scale(sgn, rhs)
            lhs = self.mat("ddbar_phi_star", p, q)
            if not linalg.mat_eq(lhs, rhs):
                raise InternalInconsistencyError(
                    "(∂∂̄_φ)* star formula fails at (%d,%d)" % (p, q)
                )
        return True
