"""Deformed cohomology dimensions at parameter points and jumping-formula reports.

All quotient dimensions are dim ker − dim im with the containment im ⊆ ker
asserted first, so a Maurer-Cartan violation at the point fails loudly rather
than producing a wrong table.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import InternalInconsistencyError


def _v(inv, p, q):
    if p < 0 or q < 0:
        return 0
    return inv[(p, q)][0] if (p, q) in inv else 0


def _w(inv, p, q):
    if p < 0 or q < 0:
        return 0
    return inv[(p, q)][1] if (p, q) in inv else 0


@dataclass
class JumpRow:
    bidegree: tuple
    h_bc: int
    h_a: int
    h_dol: int
    h_bc_def: int
    h_a_def: int
    h_dol_def: int
    v: int
    w: int
    bc_residual: int
    aeppli_residual: int
    duality_ok: bool


@dataclass
class JumpReport:
    label: str
    point: dict
    rows: dict  # (p,q) -> JumpRow
    bc_constant_iff: dict
    aeppli_constant_iff: dict

    @property
    def all_residuals_zero(self):
        return all(r.bc_residual == 0 and r.aeppli_residual == 0 for r in self.rows.values())

    @property
    def duality_ok(self):
        return all(r.duality_ok for r in self.rows.values())


class DeformedCohomology:
    def __init__(self, deformer):
        self.dfm = deformer
        self.pres = deformer.pres
        self.pkg = deformer.pkg

    # ----- dimensions at a point -------------------------------------------------

    def deformed_dim(self, point, theory, p, q):
        """dim of the deformed cohomology at the point, by exact kernel/image ranks."""
        po = self.dfm.point_ops(point)
        pres = self.pres
        dims = pres.dim
        dim = dims(p, q)
        if theory == "bc":
            ker_mat = po.d_phi_stack(p, q)
            im_cols = linalg.columns(po.mat("ddbar_phi", p - 1, q - 1))
        elif theory == "aeppli":
            ker_mat = po.mat("ddbar_phi", p, q)
            im_cols = linalg.columns(self.pkg.mat("partial", p - 1, q)) + linalg.columns(
                po.mat("dbar_phi", p, q - 1)
            )
        elif theory == "dolbeault":
            ker_mat = po.mat("dbar_phi", p, q)
            im_cols = linalg.columns(po.mat("dbar_phi", p, q - 1))
        else:
            raise KeyError("unknown theory %r" % theory)
        for col in im_cols:
            if any(linalg.mat_vec(ker_mat, col)):
                raise InternalInconsistencyError(
                    "deformed image is not closed for %s at (%d,%d); "
                    "Maurer-Cartan fails at the point" % (theory, p, q)
                )
        ker_dim = dim - linalg.rank(ker_mat)
        return ker_dim - linalg.span_dim(im_cols, dim)

    def dstar_representative_dims(self, point, p, q):
        """Dimension of the d*-gauged model of the deformed Aeppli group, and the group."""
        po = self.dfm.point_ops(point)
        pkg = self.pkg
        dim = self.pres.dim(p, q)
        gauge = pkg.mat("partial_star", p, q) + pkg.mat("dbar_star", p, q)
        ker = linalg.nullspace(gauge + po.mat("ddbar_phi", p, q), cols=dim)
        gauge_ker = linalg.nullspace(gauge, cols=dim)
        im_cols = linalg.columns(pkg.mat("partial", p - 1, q)) + linalg.columns(
            po.mat("dbar_phi", p, q - 1)
        )
        im_in_gauge = linalg.intersect_spans(im_cols, gauge_ker, dim)
        lhs = len(ker) - len(im_in_gauge)
        rhs = self.deformed_dim(point, "aeppli", p, q)
        return lhs, rhs

    def check_dstar_representatives(self, point):
        for p, q in self.pres.bidegrees():
            lhs, rhs = self.dstar_representative_dims(point, p, q)
            if lhs != rhs:
                raise InternalInconsistencyError(
                    "d*-gauged Aeppli model disagrees at (%d,%d): %d vs %d" % (p, q, lhs, rhs)
                )
        return True

    def check_point_duality(self, point):
        """h_BCφ^{p,q} = h_Aφ^{n-p,n-q} and conj∘star maps kernel gauges correctly."""
        n = self.pres.n
        po = self.dfm.point_ops(point)
        pkg = self.pkg
        for p, q in self.pres.bidegrees():
            a = self.deformed_dim(point, "bc", p, q)
            b = self.deformed_dim(point, "aeppli", n - p, n - q)
            if a != b:
                raise InternalInconsistencyError(
                    "deformed duality fails: h_BCφ(%d,%d)=%d vs h_Aφ(%d,%d)=%d"
                    % (p, q, a, n - p, n - q, b)
                )
            # conj∘star carries the deformed BC harmonic gauge into the Aeppli one
            dim = self.pres.dim(p, q)
            src = linalg.nullspace(
                po.d_phi_stack(p, q) + po.mat("ddbar_phi_star", p, q), cols=dim
            )
            tgt_dim = self.pres.dim(n - p, n - q)
            tgt = linalg.nullspace(
                po.mat("ddbar_phi", n - p, n - q)
                + po.mat("dbar_phi_star", n - p, n - q)
                + pkg.mat("partial_star", n - p, n - q),
                cols=tgt_dim,
            )
            if len(src) != len(tgt):
                raise InternalInconsistencyError(
                    "deformed harmonic gauges have different dimensions at (%d,%d)" % (p, q)
                )
            images = []
            for vec in src:
                fv = self.pres.from_coords((p, q), vec)
                images.append(self.pres.to_coords(self.pkg.conj_star(fv)))
            if linalg.span_dim(images + tgt, tgt_dim) != len(tgt):
                raise InternalInconsistencyError(
                    "conj∘star does not map deformed BC gauge onto Aeppli gauge at (%d,%d)"
                    % (p, q)
                )
        return True

    # ----- reports ------------------------------------------------------------------

    def jump_report(self, point, label=""):
        pres = self.pres
        n = pres.n
        inv = self.dfm.jump_invariants(point)
        rows = {}
        for p, q in pres.bidegrees():
            h_bc = len(self.pkg.harmonic_vectors("bc", p, q))
            h_a = len(self.pkg.harmonic_vectors("aeppli", p, q))
            h_dol = len(self.pkg.harmonic_vectors("dolbeault", p, q))
            hbc_def = self.deformed_dim(point, "bc", p, q)
            ha_def = self.deformed_dim(point, "aeppli", p, q)
            hdol_def = self.deformed_dim(point, "dolbeault", p, q)
            v, w = inv[(p, q)]
            bc_res = h_bc - (hbc_def + _v(inv, p, q) + _w(inv, p - 1, q - 1))
            a_res = h_a - (ha_def + _v(inv, n - p, n - q) + _w(inv, n - p - 1, n - q - 1))
            dual_ok = hbc_def == self.deformed_dim(point, "aeppli", n - p, n - q)
            rows[(p, q)] = JumpRow(
                bidegree=(p, q),
                h_bc=h_bc,
                h_a=h_a,
                h_dol=h_dol,
                h_bc_def=hbc_def,
                h_a_def=ha_def,
                h_dol_def=hdol_def,
                v=v,
                w=w,
                bc_residual=bc_res,
                aeppli_residual=a_res,
                duality_ok=dual_ok,
            )
        bc_const = {}
        a_const = {}
        for p, q in pres.bidegrees():
            bc_space = self.dfm.rank_matrix("bc", p, q).identically_zero
            a_space = (
                self.dfm.rank_matrix("aeppli", p - 1, q - 1).identically_zero
                if p >= 1 and q >= 1
                else True
            )
            bc_const[(p, q)] = bc_space and a_space
            bc_dual = self.dfm.rank_matrix("bc", n - p, n - q).identically_zero
            a_dual = (
                self.dfm.rank_matrix("aeppli", n - p - 1, n - q - 1).identically_zero
                if n - p - 1 >= 0 and n - q - 1 >= 0
                else True
            )
            a_const[(p, q)] = bc_dual and a_dual
        self.check_alternating_sums(point, inv, rows)
        return JumpReport(
            label=label, point=dict(point), rows=rows,
            bc_constant_iff=bc_const, aeppli_constant_iff=a_const,
        )

    def check_alternating_sums(self, point, inv, rows):
        """Telescoped jumping identity: the alternating partial sums close exactly."""
        n = self.pres.n
        for p in range(n + 1):
            for q in range(n + 1):
                lhs = 0
                rhs = 0
                for i in range(q + 1):
                    sign = (-1) ** (q - i)
                    lhs += sign * (
                        rows[(p, i)].h_bc_def + _v(inv, p, i) - _w(inv, p - 1, i)
                    )
                    rhs += sign * rows[(p, i)].h_bc
                rhs -= _w(inv, p - 1, q)
                if lhs != rhs:
                    raise InternalInconsistencyError(
                        "alternating-sum identity fails at (%d,%d)" % (p, q)
                    )
        return True

    def check_boundary_aeppli_defects(self, point):
        """Top-row and top-column Aeppli defects always vanish."""
        n = self.pres.n
        inv = self.dfm.jump_invariants(point)
        for k in range(n + 1):
            if _w(inv, n, k) or _w(inv, k, n):
                raise InternalInconsistencyError(
                    "boundary Aeppli defect nonzero at the point"
                )
        return True

    def dolbeault_jump_check(self, point, p):
        """Holomorphic-bundle jump identity along the row A^{p,•}: exact both ways."""
        n = self.pres.n
        defects = {}
        for q in range(n + 1):
            defects[q] = self.dfm.defect("dolbeault", point, p, q)
        for q in range(n + 1):
            h = len(self.pkg.harmonic_vectors("dolbeault", p, q))
            h_def = self.deformed_dim(point, "dolbeault", p, q)
            vq = defects[q]
            vq1 = defects.get(q - 1, 0)
            if h != h_def + vq + vq1:
                raise InternalInconsistencyError(
                    "Dolbeault jump identity fails at (%d,%d): %d != %d + %d + %d"
                    % (p, q, h, h_def, vq, vq1)
                )
            alt = sum(
                (-1) ** (q - i)
                * (
                    len(self.pkg.harmonic_vectors("dolbeault", p, i))
                    - self.deformed_dim(point, "dolbeault", p, i)
                )
                for i in range(q + 1)
            )
            if alt != vq:
                raise InternalInconsistencyError(
                    "Dolbeault alternating-sum identity fails at (%d,%d)" % (p, q)
                )
        return True
