"""Parameterized generators for every polyhedron used in this project.

Two families of "hats" (open surfaces with an equilateral boundary
triangle, one high-curvature peak and negatively curved middle vertices),
the closed solids obtained by gluing hats onto a regular tetrahedron or
octahedron, a pleated open fan, and convex reference solids.

All angles in the public parameter records are degrees; meshes are built
in model units with the spike base edge normalized to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateRealization,
    InsufficientAngle,
    NotASpikedSolid,
    OutOfRange,
)
from .mesh import PolyhedronMesh, build_mesh

_SQRT3 = math.sqrt(3.0)
_FLAT_TOL = 1e-12

# parameter sets used throughout tests and as CLI defaults
DEFAULT_BASIC = None   # assigned below, after the dataclass definitions
DEFAULT_TRIANGULATED = None


@dataclass(frozen=True)
class BasicHatParams:
    """Basic hat: 3 isosceles spike triangles (base angles alpha, base 1)
    over a brim of 3 symmetric trapezoids (base angles beta, top 1,
    bottom ell)."""

    alpha_deg: float
    beta_deg: float
    ell: float = 2.0

    # basic hats have no corner-apex triangles
    gamma_deg: float = 0.0

    def __post_init__(self):
        if not (30.0 <= self.alpha_deg < 90.0):
            raise OutOfRange(f"alpha must be in [30, 90), got {self.alpha_deg}")
        if not (30.0 <= self.beta_deg < 90.0):
            raise OutOfRange(f"beta must be in [30, 90), got {self.beta_deg}")
        if not self.ell > 1.0:
            raise OutOfRange(f"ell must exceed 1, got {self.ell}")

    @property
    def boundary_side(self) -> float:
        return self.ell

    def as_dict(self) -> dict:
        return {"kind": "basic", "alpha": self.alpha_deg,
                "beta": self.beta_deg, "ell": self.ell}


@dataclass(frozen=True)
class TriHatParams:
    """Triangulated hat: spike as in the basic hat; the brim is 3 isosceles
    triangles on the boundary (base angles beta) interleaved with 3
    isosceles triangles whose apex angle gamma sits at a corner and whose
    base is a spike-base edge."""

    alpha_deg: float
    beta_deg: float
    gamma_deg: float

    def __post_init__(self):
        if not (30.0 <= self.alpha_deg < 90.0):
            raise OutOfRange(f"alpha must be in [30, 90), got {self.alpha_deg}")
        if not (30.0 <= self.beta_deg + self.gamma_deg / 2 < 90.0):
            raise OutOfRange(
                f"beta + gamma/2 must be in [30, 90), got "
                f"{self.beta_deg + self.gamma_deg / 2}")
        if not (0.0 < self.gamma_deg < 60.0):
            raise OutOfRange(f"gamma must be in (0, 60), got {self.gamma_deg}")

    @property
    def boundary_side(self) -> float:
        # legs shared between boundary-base triangles and corner-apex
        # triangles force b/(2 cos beta) = 1/(2 sin(gamma/2))
        return math.cos(math.radians(self.beta_deg)) / math.sin(
            math.radians(self.gamma_deg) / 2)

    @property
    def leg(self) -> float:
        return 1.0 / (2.0 * math.sin(math.radians(self.gamma_deg) / 2))

    def as_dict(self) -> dict:
        return {"kind": "triangulated", "alpha": self.alpha_deg,
                "beta": self.beta_deg, "gamma": self.gamma_deg}


DEFAULT_BASIC = BasicHatParams(81.0, 35.0, 2.0)
DEFAULT_TRIANGULATED = TriHatParams(81.0, 30.0, 20.0)

HatParams = BasicHatParams | TriHatParams


@dataclass(frozen=True)
class FanParams:
    """Cycle of n isosceles triangles sharing a central vertex."""

    count: int
    apex_deg: float
    leg: float = 1.0

    def __post_init__(self):
        if self.count < 3:
            raise OutOfRange(f"need at least 3 triangles, got {self.count}")
        if not (0.0 < self.apex_deg < 180.0):
            raise OutOfRange(f"apex angle must be in (0, 180), got {self.apex_deg}")
        if self.leg <= 0:
            raise OutOfRange("leg length must be positive")

    def as_dict(self) -> dict:
        return {"kind": "fan", "n": self.count, "apex": self.apex_deg,
                "leg": self.leg}


@dataclass(frozen=True)
class ConstraintReport:
    """Which curvature conditions the hat parameters satisfy.

    ``negative_middles``: middle vertices have negative curvature
    (alpha > beta + gamma/2).  ``negative_middles_spike_removed``: they
    stay negative even with one spike triangle removed
    (alpha > 2*beta + gamma).  ``realizable``: the 3D realization has
    strictly positive spike and brim heights.
    """

    negative_middles: bool
    negative_middles_spike_removed: bool
    realizable: bool


# ---------------------------------------------------------------------------
# intrinsic angle bookkeeping (degrees; exact closed forms)
# ---------------------------------------------------------------------------

def middle_angle_sum_deg(params: HatParams) -> float:
    """Total face angle at a middle vertex."""
    a, b, g = params.alpha_deg, params.beta_deg, params.gamma_deg
    if isinstance(params, BasicHatParams):
        return 2 * a + 2 * (180.0 - b)
    return 2 * a + (180.0 - g) + (180.0 - 2 * b)


def middle_angle_sum_spike_removed_deg(params: HatParams) -> float:
    """Angle remaining at a middle vertex after removing one spike
    triangle (only a single alpha is then included in the sum)."""
    return middle_angle_sum_deg(params) - params.alpha_deg


def tip_angle_sum_deg(params: HatParams) -> float:
    return 3 * (180.0 - 2 * params.alpha_deg)


def corner_angle_sum_deg(params: HatParams) -> float:
    """Angle of one hat at one of its boundary corners."""
    if isinstance(params, BasicHatParams):
        return 2 * params.beta_deg
    return 2 * params.beta_deg + params.gamma_deg


def _heights(params: HatParams) -> tuple[float, float]:
    """(brim height, spike height) of the axisymmetric realization."""
    a = math.radians(params.alpha_deg)
    t = 1.0 / (2.0 * math.cos(a))
    hs_sq = t * t - 1.0 / 3.0
    if isinstance(params, BasicHatParams):
        b = math.radians(params.beta_deg)
        s = (params.ell - 1.0) / (2.0 * math.cos(b))
        hb_sq = s * s - (params.ell - 1.0) ** 2 / 3.0
    else:
        side = params.boundary_side
        d_sq = (side * side + 1.0 - side) / 3.0
        hb_sq = params.leg ** 2 - d_sq
    hb = math.sqrt(max(hb_sq, 0.0)) if hb_sq > -_FLAT_TOL else float("nan")
    hs = math.sqrt(max(hs_sq, 0.0)) if hs_sq > -_FLAT_TOL else float("nan")
    return hb, hs


def validate_hat(params: HatParams) -> ConstraintReport:
    """Report which curvature conditions hold and whether the hat has a
    strictly positive-height realization (flat brims/spikes count as
    degenerate)."""
    a, b, g = params.alpha_deg, params.beta_deg, params.gamma_deg
    hb, hs = _heights(params)
    realizable = (not math.isnan(hb) and not math.isnan(hs)
                  and hb > _FLAT_TOL and hs > _FLAT_TOL)
    return ConstraintReport(
        negative_middles=a > b + g / 2,
        negative_middles_spike_removed=a > 2 * b + g,
        realizable=realizable,
    )


# ---------------------------------------------------------------------------
# hat builders
# ---------------------------------------------------------------------------

def _ring(radius: float, z: float, phase_deg: float) -> list[np.ndarray]:
    return [
        np.array([radius * math.cos(th), radius * math.sin(th), z])
        for th in (math.radians(phase_deg + 120.0 * i) for i in range(3))
    ]


def _hat_vertices(params: HatParams, allow_flat: bool):
    hb, hs = _heights(params)
    if math.isnan(hb) or math.isnan(hs):
        raise DegenerateRealization("hat heights are imaginary")
    if (hb <= _FLAT_TOL or hs <= _FLAT_TOL) and not allow_flat:
        raise DegenerateRealization(
            "flat brim or spike (pass allow_flat=True to accept; "
            "intrinsic data is still valid)")
    side = params.boundary_side
    corners = _ring(side / _SQRT3, 0.0, 90.0)
    phase = 90.0 if isinstance(params, BasicHatParams) else 150.0
    middles = _ring(1.0 / _SQRT3, hb, phase)
    tip = np.array([0.0, 0.0, hb + hs])
    return corners, middles, tip


def build_basic_hat(params: BasicHatParams,
                    allow_flat: bool = False) -> PolyhedronMesh:
    """Open mesh with 6 faces: brim trapezoids 0-2 then spike triangles 3-5.

    Vertex ids: corners 0-2, middles 3-5 (middle i above corner i), tip 6.
    ``allow_flat`` accepts the beta=30 (flat brim) and alpha=30 (flat
    spike) degenerate realizations, whose intrinsic data is still valid.
    """
    corners, middles, tip = _hat_vertices(params, allow_flat)
    verts = corners + middles + [tip]
    c = [0, 1, 2]
    m = [3, 4, 5]
    faces = [(c[i], c[(i + 1) % 3], m[(i + 1) % 3], m[i]) for i in range(3)]
    faces += [(m[i], m[(i + 1) % 3], 6) for i in range(3)]
    return build_mesh(verts, faces)


def build_triangulated_hat(params: TriHatParams,
                           allow_flat: bool = False) -> PolyhedronMesh:
    """Open mesh with 9 triangles: boundary-base 0-2, corner-apex 3-5,
    spike 6-8; the spike base sits rotated 60 degrees versus the boundary.

    Vertex ids: corners 0-2, middles 3-5, tip 6.  Middle i lies between
    corners i and i+1; boundary-base triangle i has base (corner i,
    corner i+1) and apex middle i; corner-apex triangle j has its angle
    gamma at corner j and base (middle j-1, middle j).
    """
    corners, middles, tip = _hat_vertices(params, allow_flat)
    verts = corners + middles + [tip]
    c = [0, 1, 2]
    m = [3, 4, 5]
    faces = [(c[i], c[(i + 1) % 3], m[i]) for i in range(3)]
    faces += [(c[i], m[i], m[(i - 1) % 3]) for i in range(3)]
    faces += [(m[i], m[(i + 1) % 3], 6) for i in range(3)]
    return build_mesh(verts, faces)


def build_hat(params: HatParams, allow_flat: bool = False) -> PolyhedronMesh:
    if isinstance(params, BasicHatParams):
        return build_basic_hat(params, allow_flat)
    return build_triangulated_hat(params, allow_flat)


# ---------------------------------------------------------------------------
# gluing hats onto a guide solid
# ---------------------------------------------------------------------------

def _regular_tetrahedron_data(edge: float):
    scale = edge / (2.0 * math.sqrt(2.0))
    verts = np.array([
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ]) * scale
    faces = [(0, 1, 2), (0, 3, 1), (0, 2, 3), (1, 3, 2)]
    return verts, _orient_outward(verts, faces)


def _regular_octahedron_data(edge: float):
    c = edge / math.sqrt(2.0)
    verts = np.array([
        [c, 0, 0], [-c, 0, 0],
        [0, c, 0], [0, -c, 0],
        [0, 0, c], [0, 0, -c],
    ])
    faces = [(x, y, z) for x in (0, 1) for y in (2, 3) for z in (4, 5)]
    return verts, _orient_outward(verts, [tuple(f) for f in faces])


def _orient_outward(verts: np.ndarray, faces: list[tuple[int, ...]]):
    centroid = verts.mean(axis=0)
    oriented = []
    for loop in faces:
        pts = verts[list(loop)]
        n = np.cross(pts[1] - pts[0], pts[2] - pts[0])
        if np.dot(n, pts.mean(axis=0) - centroid) < 0:
            loop = tuple(reversed(loop))
        oriented.append(loop)
    return oriented


def _triangle_frame(p0, p1, p2):
    """Right-handed orthonormal frame (u, w, n) of an oriented triangle."""
    u = p1 - p0
    u = u / np.linalg.norm(u)
    n = np.cross(p1 - p0, p2 - p0)
    n = n / np.linalg.norm(n)
    w = np.cross(n, u)
    return np.column_stack([u, w, n])


def _glue_hats(params: HatParams, guide_verts, guide_faces) -> PolyhedronMesh:
    """Place one hat against every guide face (spikes outward along the
    face normals) and drop the guide solid.

    Vertex ids: guide corners first, then per guide face its 3 middles
    and its tip.  Hat corners are identified with guide vertices by index
    map; coordinates are asserted to agree rather than snapped.
    """
    report = validate_hat(params)
    if not report.realizable:
        raise DegenerateRealization(
            "hat parameters are not realizable; closed solids need "
            "strictly positive heights")
    hat_corners, hat_middles, hat_tip = _hat_vertices(params, allow_flat=False)
    local = np.array(hat_corners + hat_middles + [hat_tip])
    frame_local = _triangle_frame(local[0], local[1], local[2])

    n_guide = len(guide_verts)
    verts: list[np.ndarray] = [np.asarray(p, dtype=float) for p in guide_verts]
    faces: list[tuple[int, ...]] = []
    basic = isinstance(params, BasicHatParams)
    for loop in guide_faces:
        target = np.array([guide_verts[v] for v in loop])
        frame_target = _triangle_frame(*target)
        rot = frame_target @ frame_local.T
        placed = (local - local[0]) @ rot.T + target[0]
        for i in range(3):
            if np.linalg.norm(placed[i] - target[i]) > 1e-9 * max(
                    1.0, float(np.abs(target).max())):
                raise AssertionError(
                    "hat corner does not land on its guide vertex")
        mid_base = len(verts)
        verts.extend(placed[3:6])
        tip_id = mid_base + 3
        verts.append(placed[6])
        c = list(loop)
        m = [mid_base, mid_base + 1, mid_base + 2]
        if basic:
            faces += [(c[i], c[(i + 1) % 3], m[(i + 1) % 3], m[i])
                      for i in range(3)]
        else:
            faces += [(c[i], c[(i + 1) % 3], m[i]) for i in range(3)]
            faces += [(c[i], m[i], m[(i - 1) % 3]) for i in range(3)]
        faces += [(m[i], m[(i + 1) % 3], tip_id) for i in range(3)]
    del n_guide
    return build_mesh(verts, faces)


def build_spiked_tetrahedron(params: HatParams) -> PolyhedronMesh:
    """Closed genus-0 solid: one hat per face of a regular tetrahedron
    whose edge equals the hat boundary side."""
    gv, gf = _regular_tetrahedron_data(params.boundary_side)
    return _glue_hats(params, gv, gf)


def build_spiked_octahedron(params: HatParams) -> PolyhedronMesh:
    """Same construction over the 8 faces of a regular octahedron."""
    gv, gf = _regular_octahedron_data(params.boundary_side)
    return _glue_hats(params, gv, gf)


# ---------------------------------------------------------------------------
# structure introspection for spiked solids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HatRegion:
    """One hat of a spiked solid: its corner/middle/tip vertex ids and the
    ids of its internal (non-boundary-triangle) edges."""

    corners: tuple[int, ...]
    middles: tuple[int, ...]
    tip: int
    internal_edges: frozenset[int]


def spiked_structure(mesh: PolyhedronMesh) -> list[HatRegion]:
    """Recover the hat partition of a mesh built by the gluing functions.

    Relies on the deterministic vertex layout (guide corners first, then
    per hat 3 middles + tip) and raises NotASpikedSolid otherwise.
    """
    for n_corners, faces_per_hat in ((4, 6), (4, 9), (6, 6), (6, 9)):
        n_hats = 4 if n_corners == 4 else 8
        if (mesh.vertex_count == n_corners + 4 * n_hats
                and mesh.face_count == n_hats * faces_per_hat):
            break
    else:
        raise NotASpikedSolid(
            f"V={mesh.vertex_count}, F={mesh.face_count} does not match any "
            "spiked tetrahedron/octahedron layout")
    regions = []
    for h in range(n_hats):
        base = n_corners + 4 * h
        middles = (base, base + 1, base + 2)
        tip = base + 3
        hat_vertex_block = set(middles) | {tip}
        corners = set()
        internal = set()
        for e in mesh.edges:
            a, b = e.endpoints
            if a in hat_vertex_block or b in hat_vertex_block:
                internal.add(e.id)
                for v in (a, b):
                    if v < n_corners:
                        corners.add(v)
        if len(corners) != 3:
            raise NotASpikedSolid(f"hat {h} does not touch exactly 3 corners")
        regions.append(HatRegion(tuple(sorted(corners)), middles, tip,
                                 frozenset(internal)))
    return regions


# ---------------------------------------------------------------------------
# open fan
# ---------------------------------------------------------------------------

def _fan_spoke_directions(n: int, apex_rad: float) -> list[np.ndarray]:
    """Unit spoke directions with consecutive angles exactly ``apex_rad``.

    Even n: uniform pleat, rim vertices alternating above/below a cone.
    Odd n: one spoke on the equator, the rest pleated, with the two
    mixed azimuthal steps solved by bisection so the steps close up.
    """
    cos_t = math.cos(apex_rad)
    if n % 2 == 0:
        denom = 1.0 + math.cos(2.0 * math.pi / n)
        c_sq = (1.0 + cos_t) / denom
        if not 0.0 < c_sq <= 1.0:
            raise DegenerateRealization("no uniform pleated cone exists")
        c = math.sqrt(c_sq)
        s = math.sqrt(max(0.0, 1.0 - c_sq))
        step = 2.0 * math.pi / n
        return [
            np.array([c * math.cos(i * step), c * math.sin(i * step),
                      s * (1 if i % 2 == 0 else -1)])
            for i in range(n)
        ]

    def steps(c):
        # mixed step (equator spoke to pleated spoke) and full-pleat step
        am = cos_t / c
        af = (cos_t + 1.0 - c * c) / (c * c)
        if not (-1.0 <= am <= 1.0 and -1.0 <= af <= 1.0):
            return None
        return math.acos(am), math.acos(af)

    def closure(c):
        st = steps(c)
        if st is None:
            return None
        dm, df = st
        return 2.0 * dm + (n - 2) * df - 2.0 * math.pi

    lo = max(abs(cos_t), math.sqrt(max((1.0 + cos_t) / 2.0, 0.0))) + 1e-12
    hi = 1.0 - 1e-12
    f_hi = closure(hi)
    f_lo = closure(lo)
    if f_hi is None or f_lo is None or f_hi <= 0 or f_lo >= 0:
        raise DegenerateRealization("no pleated realization found for odd n")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = closure(mid)
        if val is None or val > 0:
            hi = mid
        else:
            lo = mid
    c = 0.5 * (lo + hi)
    dm, df = steps(c)
    s = math.sqrt(max(0.0, 1.0 - c * c))
    dirs = [np.array([1.0, 0.0, 0.0])]
    phi = dm
    for i in range(1, n):
        z = s if i % 2 == 1 else -s
        dirs.append(np.array([c * math.cos(phi), c * math.sin(phi), z]))
        phi += df if i < n - 1 else dm
    return dirs


def build_open_fan(params: FanParams) -> PolyhedronMesh:
    """n isosceles triangles around a central vertex, realized as a
    pleated cone (alternating dihedral folds).

    Vertex ids: center 0, rim 1..n.  Rejects n*apex <= 360 with
    InsufficientAngle (the center must have negative curvature).
    """
    n, apex = params.count, math.radians(params.apex_deg)
    if n * params.apex_deg <= 360.0:
        raise InsufficientAngle(
            f"{n} x {params.apex_deg} deg = {n * params.apex_deg} <= 360")
    dirs = _fan_spoke_directions(n, apex)
    verts = [np.zeros(3)] + [params.leg * d for d in dirs]
    faces = [(0, 1 + i, 1 + (i + 1) % n) for i in range(n)]
    return build_mesh(verts, faces)


# ---------------------------------------------------------------------------
# reference solids
# ---------------------------------------------------------------------------

def build_reference(solid: str) -> PolyhedronMesh:
    """Unit-edge regular tetrahedron or cube (positive controls)."""
    if solid == "tetrahedron":
        gv, gf = _regular_tetrahedron_data(1.0)
        return build_mesh(gv, gf)
    if solid == "cube":
        verts = [np.array([x, y, z], dtype=float)
                 for z in (0, 1) for y in (0, 1) for x in (0, 1)]
        faces = [
            (0, 2, 3, 1),  # bottom (z=0), seen from below
            (4, 5, 7, 6),  # top
            (0, 1, 5, 4),  # y=0
            (2, 6, 7, 3),  # y=1
            (0, 4, 6, 2),  # x=0
            (1, 3, 7, 5),  # x=1
        ]
        return build_mesh(verts, faces)
    raise OutOfRange(f"unknown reference solid {solid!r}")
