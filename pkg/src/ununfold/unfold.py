"""Cuttings, planar layouts, overlap detection, and general unfoldings.

A cutting is a set of mesh edge ids.  ``layout`` develops the cut surface
into the plane by breadth-first traversal of the dual graph minus the cut
edges; faces adjacent across an uncut edge must land on the same segment,
and any non-tree dual edge whose two placements disagree marks the layout
inconsistent (an enclosed-curvature obstruction).  ``check_overlap`` then
decides whether the development is an actual unfolding.

The cross-face constructions (connector-band unfolding of a spiked
tetrahedron, single straight cut of a fan) are implemented at the end of
the module; they share the same fragment-placement and overlap machinery.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BandCollision,
    BoundaryEdgeInCutting,
    InadmissibleCutting,
    InconsistentLayout,
    NotASpikedSolid,
    UnunfoldError,
)
from .mesh import PolyhedronMesh

CONSISTENCY_TOL_FACTOR = 1e-6   # x mesh diameter, for non-tree dual edges
OVERLAP_AREA_FACTOR = 1e-9      # x total area, minimum area that counts

ANGLE_TOL = 1e-9


def canonical_cutting(edge_ids: Iterable[int]) -> tuple[int, ...]:
    """Canonical encoding of a cutting: sorted tuple of edge ids."""
    return tuple(sorted(set(int(e) for e in edge_ids)))


@dataclass(frozen=True)
class CutValidity:
    is_forest: bool
    spans_required: bool
    surface_connected: bool
    component_count: int

    @property
    def admissible(self) -> bool:
        return self.is_forest and self.spans_required and self.surface_connected


def validate_cutting(mesh: PolyhedronMesh,
                     edge_ids: Iterable[int]) -> CutValidity:
    """Admissibility of an edge cutting.

    A cutting must be a forest of non-boundary edges, touch every interior
    vertex of nonzero curvature, and leave the surface connected.
    Boundary edges in the cutting raise BoundaryEdgeInCutting.
    """
    cut = canonical_cutting(edge_ids)
    for e in cut:
        if e in mesh.boundary_edge_ids:
            raise BoundaryEdgeInCutting(f"edge {e} is on the boundary")

    # forest test: union-find over cut-edge endpoints
    parent: dict[int, int] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    is_forest = True
    merges = 0
    touched: set[int] = set()
    for e in cut:
        a, b = mesh.edges[e].endpoints
        for v in (a, b):
            if v not in parent:
                parent[v] = v
                touched.add(v)
        ra, rb = find(a), find(b)
        if ra == rb:
            is_forest = False
        else:
            parent[ra] = rb
            merges += 1
    component_count = len(touched) - merges

    cutset = set(cut)
    spans = True
    for v in mesh.interior_vertex_ids():
        if abs(mesh.curvature(v)) > ANGLE_TOL:
            fan = mesh.vertex_fans[v]
            if not any(e in cutset for e in fan.edge_ids):
                spans = False
                break

    # surface connectivity: faces joined across uncut internal edges
    fparent = list(range(mesh.face_count))

    def ffind(x):
        while fparent[x] != x:
            fparent[x] = fparent[fparent[x]]
            x = fparent[x]
        return x

    for e in mesh.edges:
        if len(e.faces) == 2 and e.id not in cutset:
            ra, rb = ffind(e.faces[0]), ffind(e.faces[1])
            if ra != rb:
                fparent[ra] = rb
    connected = len({ffind(f) for f in range(mesh.face_count)}) == 1
    return CutValidity(is_forest, spans, connected, component_count)


# ---------------------------------------------------------------------------
# 2D primitives
# ---------------------------------------------------------------------------

def polygon_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def clip_polygon_halfplane(poly: np.ndarray, normal, offset,
                           tol: float = 0.0) -> np.ndarray:
    """Clip a convex CCW polygon to the half-plane normal.x <= offset."""
    if len(poly) == 0:
        return poly
    dist = poly @ np.asarray(normal) - offset
    out = []
    k = len(poly)
    for i in range(k):
        j = (i + 1) % k
        di, dj = dist[i], dist[j]
        if di <= tol:
            out.append(poly[i])
        if (di < -tol and dj > tol) or (di > tol and dj < -tol):
            t = di / (di - dj)
            out.append(poly[i] + t * (poly[j] - poly[i]))
    if len(out) < 3:
        return np.empty((0, 2))
    return np.array(out)


def convex_intersection(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Intersection polygon of two convex CCW polygons (may be empty)."""
    out = a
    k = len(b)
    for i in range(k):
        p, q = b[i], b[(i + 1) % k]
        edge = q - p
        normal = np.array([edge[1], -edge[0]])  # interior of CCW poly: n.x <= n.p
        out = clip_polygon_halfplane(out, normal, float(normal @ p))
        if len(out) == 0:
            break
    return out

def convex_intersection_area(a: np.ndarray, b: np.ndarray) -> float:
    inter = convex_intersection(a, b)
    if len(inter) < 3:
        return 0.0
    return abs(polygon_area(inter))


def _direct_isometry(src_a, src_b, dst_a, dst_b):
    """Rotation+translation mapping segment (src_a, src_b) onto
    (dst_a, dst_b); segment lengths must agree."""
    vs = src_b - src_a
    vd = dst_b - dst_a
    ang = math.atan2(vd[1], vd[0]) - math.atan2(vs[1], vs[0])
    c, s = math.cos(ang), math.sin(ang)
    rot = np.array([[c, -s], [s, c]])
    return rot, dst_a - rot @ src_a


# ---------------------------------------------------------------------------
# planar layout of an edge cutting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlacedFace:
    face_id: int
    rotation: np.ndarray      # 2x2, det +1
    translation: np.ndarray   # (2,)
    polygon: np.ndarray       # (k, 2), row i is vertex_loop[i]

    def place(self, local_pt: np.ndarray) -> np.ndarray:
        return self.rotation @ local_pt + self.translation


@dataclass
class PlanarLayout:
    mesh: PolyhedronMesh
    cutting: tuple[int, ...]
    placements: list[PlacedFace]
    tree_dual_edges: tuple[int, ...]
    nontree_discrepancy: dict[int, float]
    consistency_ok: bool
    max_discrepancy: float

    def placed_vertex(self, face_id: int, vertex_id: int) -> np.ndarray:
        face = self.mesh.faces[face_id]
        return self.placements[face_id].polygon[face.vertex_loop.index(vertex_id)]

    def total_area(self) -> float:
        return sum(abs(polygon_area(p.polygon)) for p in self.placements)


def layout(mesh: PolyhedronMesh, edge_ids: Iterable[int]) -> PlanarLayout:
    """Develop the cut surface into the plane.

    Root face = lowest id; breadth-first over the dual graph minus the cut
    edges, neighbors in ascending face id; each face is placed by the
    unique orientation-preserving isometry matching its shared uncut edge
    with its parent.  Raises InadmissibleCutting when the cutting
    disconnects the surface (or contains a boundary edge); other validity
    defects simply produce an inconsistent or overlapping development.
    """
    cut = canonical_cutting(edge_ids)
    cutset = set(cut)
    for e in cut:
        if e in mesh.boundary_edge_ids:
            raise BoundaryEdgeInCutting(f"edge {e} is on the boundary")

    neighbors: list[list[tuple[int, int]]] = [[] for _ in range(mesh.face_count)]
    for e in mesh.edges:
        if len(e.faces) == 2 and e.id not in cutset:
            f, g = e.faces
            neighbors[f].append((g, e.id))
            neighbors[g].append((f, e.id))
    for lst in neighbors:
        lst.sort()

    local = [mesh.face_local_coords(f) for f in range(mesh.face_count)]
    placements: list[PlacedFace | None] = [None] * mesh.face_count
    placements[0] = PlacedFace(0, np.eye(2), np.zeros(2), local[0].copy())
    tree_edges = []
    used_dual = set()
    queue = deque([0])
    while queue:
        f = queue.popleft()
        pf = placements[f]
        floop = mesh.faces[f].vertex_loop
        for g, eid in neighbors[f]:
            if placements[g] is not None:
                continue
            a, b = mesh.edges[eid].endpoints
            dst_a = pf.polygon[floop.index(a)]
            dst_b = pf.polygon[floop.index(b)]
            gloop = mesh.faces[g].vertex_loop
            src_a = local[g][gloop.index(a)]
            src_b = local[g][gloop.index(b)]
            rot, trans = _direct_isometry(src_a, src_b, dst_a, dst_b)
            placements[g] = PlacedFace(g, rot, trans,
                                       local[g] @ rot.T + trans)
            tree_edges.append(eid)
            used_dual.add(eid)
            queue.append(g)
    if any(p is None for p in placements):
        raise InadmissibleCutting("cutting disconnects the surface")

    tol = CONSISTENCY_TOL_FACTOR * max(mesh.bbox_diameter, 1.0)
    nontree = {}
    max_disc = 0.0
    for e in mesh.edges:
        if len(e.faces) == 2 and e.id not in cutset and e.id not in used_dual:
            f, g = e.faces
            disc = 0.0
            for v in e.endpoints:
                pa = placements[f].polygon[mesh.faces[f].vertex_loop.index(v)]
                pb = placements[g].polygon[mesh.faces[g].vertex_loop.index(v)]
                disc = max(disc, float(np.linalg.norm(pa - pb)))
            nontree[e.id] = disc
            max_disc = max(max_disc, disc)
    return PlanarLayout(mesh, cut, placements, tuple(tree_edges), nontree,
                        max_disc <= tol, max_disc)


# ---------------------------------------------------------------------------
# overlap detection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OverlapReport:
    overlapping_pairs: tuple[tuple[int, int, float], ...]
    max_area: float
    eps_area: float

    @property
    def is_overlapping(self) -> bool:
        return bool(self.overlapping_pairs)


def overlap_report_for_polygons(polys: Sequence[np.ndarray],
                                eps_area: float | None = None) -> OverlapReport:
    """All-pairs convex intersection test over placed polygons.

    Pairs sharing only boundary points are not overlaps; the report keeps
    the maximum pairwise intersection area so near-misses are auditable.
    """
    if eps_area is None:
        total = sum(abs(polygon_area(p)) for p in polys)
        eps_area = OVERLAP_AREA_FACTOR * max(total, 1e-30)
    boxes = [(p.min(axis=0), p.max(axis=0)) for p in polys]
    pairs = []
    max_area = 0.0
    for i, j in itertools.combinations(range(len(polys)), 2):
        if (boxes[i][0] > boxes[j][1]).any() or (boxes[j][0] > boxes[i][1]).any():
            continue
        area = convex_intersection_area(polys[i], polys[j])
        max_area = max(max_area, area)
        if area > eps_area:
            pairs.append((i, j, area))
    return OverlapReport(tuple(pairs), max_area, eps_area)


def check_overlap(lay: PlanarLayout,
                  eps_area: float | None = None) -> OverlapReport:
    """Overlap report of a consistent layout (InconsistentLayout otherwise)."""
    if not lay.consistency_ok:
        raise InconsistentLayout(
            f"layout max edge discrepancy {lay.max_discrepancy:.3e}")
    return overlap_report_for_polygons([p.polygon for p in lay.placements],
                                       eps_area)


@dataclass(frozen=True)
class UnfoldResult:
    layout: PlanarLayout
    overlap: OverlapReport | None  # None when the layout is inconsistent

    @property
    def is_net(self) -> bool:
        return (self.layout.consistency_ok and self.overlap is not None
                and not self.overlap.is_overlapping)


def unfold_edges(mesh: PolyhedronMesh, edge_ids: Iterable[int]) -> UnfoldResult:
    lay = layout(mesh, edge_ids)
    report = check_overlap(lay) if lay.consistency_ok else None
    return UnfoldResult(lay, report)


# ---------------------------------------------------------------------------
# canonical net signature (congruence dedup)
# ---------------------------------------------------------------------------

def net_signature(polys: Sequence[np.ndarray], quantum: float | None = None):
    """Canonical form of a set of placed convex polygons, invariant under
    rotation, translation and reflection.

    Every directed polygon edge (both mirrorings) is tried as the anchor
    frame; vertices are quantized and each polygon reduced to its sorted
    vertex tuple (faithful for convex polygons); the lexicographically
    smallest description wins.
    """
    if quantum is None:
        # scale must be congruence-invariant; area is, bounding boxes are not
        total = sum(abs(polygon_area(p)) for p in polys)
        quantum = 1e-6 * max(math.sqrt(total), 1e-12)

    best = None
    for poly in polys:
        k = len(poly)
        for i in range(k):
            # both edge directions: a mirrored net stores reversed loops
            for a, b in ((poly[i], poly[(i + 1) % k]),
                         (poly[(i + 1) % k], poly[i])):
                rot, trans = _direct_isometry(
                    a, b, np.zeros(2),
                    np.array([float(np.linalg.norm(b - a)), 0.0]))
                for reflect in (False, True):
                    desc = []
                    for q in polys:
                        pts = q @ rot.T + trans
                        if reflect:
                            pts = pts * np.array([1.0, -1.0])
                        cells = tuple(sorted(
                            (round(x / quantum), round(y / quantum))
                            for x, y in pts))
                        desc.append(cells)
                    cand = tuple(sorted(desc))
                    if best is None or cand < best:
                        best = cand
    return best


def layout_signature(lay: PlanarLayout):
    return net_signature([p.polygon for p in lay.placements])


# ---------------------------------------------------------------------------
# general unfolding of a spiked tetrahedron (cross-face cuts)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NetPiece:
    face_id: int
    kind: str            # "face", "side", or "band"
    polygon: np.ndarray  # placed, CCW


@dataclass
class GeneralNet:
    pieces: list[NetPiece]
    gluings: list[tuple[int, int, int]]  # piece index, piece index, edge id
    band_width: float
    band_skew_deg: float
    total_area: float
    overlap: OverlapReport


@dataclass
class _Fragment:
    """One convex region of one face, described in face-local coordinates
    by the face polygon clipped against a list of half-planes."""

    face_id: int
    kind: str
    halfplanes: list[tuple[np.ndarray, float]] = field(default_factory=list)
    polygon: np.ndarray | None = None

    def edge_interval(self, p: np.ndarray, q: np.ndarray, length: float,
                      tol: float):
        """Sub-interval of the local segment p->q (parameterized 0..length)
        on this fragment's boundary, or None."""
        lo, hi = 0.0, 1.0
        for normal, offset in self.halfplanes:
            dp = float(normal @ p) - offset
            dq = float(normal @ q) - offset
            if dp <= 0 and dq <= 0:
                continue
            if dp > 0 and dq > 0:
                return None
            t = dp / (dp - dq)
            if dp > 0:
                lo = max(lo, t)
            else:
                hi = min(hi, t)
        if (hi - lo) * length <= tol:
            return None
        return lo * length, hi * length


def _interval_overlap(a, b):
    lo = max(a[0], b[0])
    hi = min(a[1], b[1])
    return (lo, hi) if hi > lo else None


def general_unfold_spiked_tetrahedron(mesh: PolyhedronMesh,
                                      band_width: float = 0.05,
                                      band_skew_deg: float = 75.0,
                                      ) -> GeneralNet:
    """Cross-face unfolding of a spiked tetrahedron.

    The four brims unfold along a strip (parallelogram) development of the
    guide tetrahedron; each spike is detached together with a narrow band
    of brim material that reaches a cut guide edge, and the band-plus-spike
    flap is re-attached across the matching segment on the other side of
    that edge.  Bands are skewed so that flaps attached from opposite
    sides of one guide edge land on disjoint segments; a perpendicular
    band (skew 90) is rejected.  The output is verified: fragment graph
    connected, every gluing consistent, no overlapping pieces, area equal
    to the mesh surface area.
    """
    from .constructions import spiked_structure

    if abs(band_skew_deg - 90.0) < 1e-9:
        raise BandCollision(
            "perpendicular bands attach where the opposite band was removed")
    if not (0.0 < band_skew_deg < 180.0):
        raise BandCollision("band skew must be in (0, 180) degrees")
    if band_width <= 0:
        raise BandCollision("band width must be positive")

    structure = spiked_structure(mesh)
    if len(structure) != 4:
        raise NotASpikedSolid(
            "general unfolding is implemented for spiked tetrahedra")

    tol = 1e-9 * max(mesh.bbox_diameter, 1.0)

    hat_boundary_edges = [
        {mesh.edge_index[(a, b)]
         for a, b in itertools.combinations(sorted(region.corners), 2)
         if (a, b) in mesh.edge_index}
        for region in structure
    ]

    # strip development of the guide tetrahedron: hats 0-1-2-3 in a path,
    # joined across their shared guide edges
    uncut_guide = []
    for h in range(3):
        shared = hat_boundary_edges[h] & hat_boundary_edges[h + 1]
        if not shared:
            raise NotASpikedSolid("hats do not share guide edges as expected")
        uncut_guide.append(min(shared))
    if len(set(uncut_guide)) != 3:
        raise NotASpikedSolid("degenerate guide adjacency")
    all_guide = set().union(*hat_boundary_edges)
    cut_guide = sorted(all_guide - set(uncut_guide))

    # pick each hat's exit edge among its cut guide edges, spreading usage
    usage: dict[int, int] = {e: 0 for e in cut_guide}
    exit_edge: list[int] = []
    for h in range(4):
        options = sorted(hat_boundary_edges[h] & set(cut_guide),
                         key=lambda e: (usage[e], e))
        if not options:
            raise BandCollision("hat has no cut guide edge to exit through")
        exit_edge.append(options[0])
        usage[options[0]] += 1

    spike_faces = [
        {f.id for f in mesh.faces if structure[h].tip in f.vertex_loop}
        for h in range(4)
    ]
    face_hat = {}
    for h, region in enumerate(structure):
        for f in mesh.faces:
            if set(f.vertex_loop) & (set(region.middles) | {region.tip}):
                face_hat[f.id] = h

    local = [mesh.face_local_coords(f) for f in range(mesh.face_count)]

    def local_pos(face_id, vertex_id):
        return local[face_id][mesh.faces[face_id].vertex_loop.index(vertex_id)]

    # --- per-hat band definition ------------------------------------------

    # edge id -> list of (lo, hi) uncut intervals in canonical edge
    # parameterization (from the smaller endpoint, in length units)
    uncut_intervals: dict[int, list[tuple[float, float]]] = {}
    for e in mesh.edges:
        if len(e.faces) == 2:
            uncut_intervals[e.id] = [(0.0, e.length)]

    fragments: dict[int, list[_Fragment]] = {
        f: [_Fragment(f, "face")] for f in range(mesh.face_count)
    }
    landing: dict[int, list[tuple[float, float]]] = {e: [] for e in cut_guide}

    for h in range(4):
        region = structure[h]
        e_exit = mesh.edges[exit_edge[h]]

        # brim face whose boundary side is the exit edge
        bottom_faces = [f for f in e_exit.faces if face_hat[f] == h]
        if len(bottom_faces) != 1:
            raise NotASpikedSolid("exit edge not on exactly one hat face")
        f_bottom = bottom_faces[0]

        # chain of brim faces from a spike-base edge down to the exit edge
        chain = [f_bottom]
        top_face = f_bottom
        spike_base_edge = None
        guard = 0
        while spike_base_edge is None:
            guard += 1
            if guard > 4:
                raise NotASpikedSolid("could not reach the spike base")
            for e in mesh.edges:
                if top_face in e.faces and len(e.faces) == 2:
                    a, b = e.endpoints
                    if a in region.middles and b in region.middles:
                        spike_base_edge = e.id
                        break
            if spike_base_edge is None:
                # step across the leg toward the spike: pick the neighbor
                # face (same hat, not a spike face) sharing a middle vertex
                nxt = None
                for e in mesh.edges:
                    if top_face in e.faces and len(e.faces) == 2:
                        other = e.faces[0] if e.faces[1] == top_face else e.faces[1]
                        if (face_hat.get(other) == h
                                and other not in spike_faces[h]
                                and other not in chain
                                and set(mesh.edges[e.id].endpoints)
                                & set(region.middles)):
                            nxt = (other, e.id)
                            break
                if nxt is None:
                    raise NotASpikedSolid("brim chain construction failed")
                chain.append(nxt[0])
                top_face = nxt[0]

        # develop the chain flat (face-local frames joined across legs)
        dev: dict[int, tuple[np.ndarray, np.ndarray]] = {
            chain[0]: (np.eye(2), np.zeros(2))
        }
        for i in range(1, len(chain)):
            prev, cur = chain[i - 1], chain[i]
            shared = next(
                e for e in mesh.edges
                if len(e.faces) == 2 and set(e.faces) == {prev, cur})
            a, b = shared.endpoints
            rp, tp = dev[prev]
            dst_a = rp @ local_pos(prev, a) + tp
            dst_b = rp @ local_pos(prev, b) + tp
            rot, trans = _direct_isometry(local_pos(cur, a), local_pos(cur, b),
                                          dst_a, dst_b)
            dev[cur] = (rot, trans)

        def devpt(face_id, vertex_id):
            rot, trans = dev[face_id]
            return rot @ local_pos(face_id, vertex_id) + trans

        sb = mesh.edges[spike_base_edge]
        sb_a, sb_b = sb.endpoints
        top_a, top_b = devpt(top_face, sb_a), devpt(top_face, sb_b)
        ex_a, ex_b = sorted(e_exit.endpoints)
        bot_a, bot_b = devpt(f_bottom, ex_a), devpt(f_bottom, ex_b)

        # strip: two lines parallel to the skewed direction, centered on
        # the midpoint of the spike-base edge
        u_bottom = (bot_b - bot_a) / np.linalg.norm(bot_b - bot_a)
        skew = math.radians(band_skew_deg)
        c, s = math.cos(skew), math.sin(skew)
        d = np.array([c * u_bottom[0] - s * u_bottom[1],
                      s * u_bottom[0] + c * u_bottom[1]])
        n = np.array([-d[1], d[0]])
        width = band_width * e_exit.length
        center = 0.5 * (top_a + top_b)
        c0 = float(n @ center)
        lines = (c0 - width / 2.0, c0 + width / 2.0)

        # the band region is additionally confined between the spike-base
        # line and the exit-edge line (oriented toward the brim interior)
        confine = []
        for (pa, pb), interior_ref in (((top_a, top_b), bot_a),
                                       ((bot_a, bot_b), top_a)):
            e_dir = pb - pa
            nn = np.array([-e_dir[1], e_dir[0]])
            off = float(nn @ pa)
            if float(nn @ interior_ref) > off:  # flip so the brim side is nn.x <= off
                nn, off = -nn, -off
            confine.append((nn, off))

        # landing intervals (canonical edge parameterization)
        def landing_interval(edge, pa_dev, pb_dev):
            # pa_dev corresponds to the smaller endpoint of `edge`
            denom = float(n @ (pb_dev - pa_dev))
            if abs(denom) < 1e-15:
                raise BandCollision("band runs parallel to a landing edge")
            t1 = (lines[0] - float(n @ pa_dev)) / denom * edge.length
            t2 = (lines[1] - float(n @ pa_dev)) / denom * edge.length
            lo, hi = min(t1, t2), max(t1, t2)
            if lo < tol or hi > edge.length - tol:
                raise BandCollision("band landing leaves its edge")
            return lo, hi

        sb_lo, sb_hi = sorted(sb.endpoints)
        top_lo_pt = devpt(top_face, sb_lo)
        top_hi_pt = devpt(top_face, sb_hi)
        top_int = landing_interval(sb, top_lo_pt, top_hi_pt)
        bot_int = landing_interval(e_exit, bot_a, bot_b)

        # record cut status: spike legs (one cut), spike-base edges (cut
        # outside the band landing), exit edge handled after the loop
        tip = region.tip
        base_mids = {sb_a, sb_b}
        other_mid = (set(region.middles) - base_mids).pop()
        for e in mesh.edges:
            a, b = e.endpoints
            if tip in (a, b):
                other = b if a == tip else a
                if other == other_mid:
                    uncut_intervals[e.id] = []          # the one cut spike leg
            elif a in region.middles and b in region.middles:
                if e.id == spike_base_edge:
                    uncut_intervals[e.id] = [top_int]   # band stays attached
                else:
                    uncut_intervals[e.id] = []

        landing[exit_edge[h]].append(bot_int)

        # fragment the chain faces: side pieces outside the strip lines,
        # band piece between them (confined between the landing lines)
        for f in chain:
            rot, trans = dev[f]
            def pull(normal, offset):
                # half-plane in development coords -> face-local coords
                return rot.T @ normal, offset - float(normal @ trans)

            side_a = _Fragment(f, "side", [pull(n, lines[0])])
            side_b = _Fragment(f, "side", [pull(-n, -lines[1])])
            band = _Fragment(f, "band",
                             [pull(-n, -lines[0]), pull(n, lines[1])]
                             + [pull(nn, off) for nn, off in confine])
            fragments[f] = [side_a, band, side_b]

    # flaps attached from opposite sides of one guide edge must land on
    # disjoint segments; this is what fails for perpendicular bands
    for e in cut_guide:
        ivs = sorted(landing[e])
        for i in range(len(ivs) - 1):
            if ivs[i][1] > ivs[i + 1][0] - tol:
                raise BandCollision(
                    f"bands from both sides of guide edge {e} land on "
                    f"overlapping segments {ivs[i]} and {ivs[i + 1]}")
        uncut_intervals[e] = ivs

    # guide edges not used for landing stay cut; uncut guide edges full
    for e in cut_guide:
        if not landing[e]:
            uncut_intervals[e] = []

    # --- materialize fragment polygons and gluing graph --------------------

    all_frags: list[_Fragment] = []
    frag_ids: dict[int, list[int]] = {}
    for f in range(mesh.face_count):
        ids = []
        for frag in fragments[f]:
            poly = local[f].copy()
            for normal, offset in frag.halfplanes:
                poly = clip_polygon_halfplane(poly, normal, offset)
                if len(poly) == 0:
                    break
            if len(poly) >= 3 and abs(polygon_area(poly)) > tol * tol:
                frag.polygon = poly
                ids.append(len(all_frags))
                all_frags.append(frag)
        frag_ids[f] = ids

    arcs: list[tuple[int, int, int, float, float]] = []
    for e in mesh.edges:
        if len(e.faces) != 2:
            continue
        spans = uncut_intervals.get(e.id, [])
        if not spans:
            continue
        a, b = e.endpoints
        f, g = e.faces
        for fi in frag_ids[f]:
            int_f = all_frags[fi].edge_interval(
                local_pos(f, a), local_pos(f, b), e.length, tol)
            if int_f is None:
                continue
            for gi in frag_ids[g]:
                int_g = all_frags[gi].edge_interval(
                    local_pos(g, a), local_pos(g, b), e.length, tol)
                if int_g is None:
                    continue
                for span in spans:
                    j = _interval_overlap(_interval_overlap(int_f, int_g) or
                                          (1.0, 0.0), span)
                    if j and j[1] - j[0] > tol:
                        arcs.append((fi, gi, e.id, j[0], j[1]))

    # breadth-first placement over fragments
    adjacency: dict[int, list[tuple[int, int, float, float]]] = {
        i: [] for i in range(len(all_frags))
    }
    for fi, gi, eid, lo, hi in arcs:
        adjacency[fi].append((gi, eid, lo, hi))
        adjacency[gi].append((fi, eid, lo, hi))
    for lst in adjacency.values():
        lst.sort()

    placed: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    root = frag_ids[0][0]
    placed[root] = (np.eye(2), np.zeros(2))
    order = [root]
    queue = deque([root])
    tree_arcs = set()
    while queue:
        fi = queue.popleft()
        rot_f, trans_f = placed[fi]
        face_f = all_frags[fi].face_id
        for gi, eid, lo, hi in adjacency[fi]:
            if gi in placed:
                continue
            a, b = mesh.edges[eid].endpoints
            la, lb = local_pos(face_f, a), local_pos(face_f, b)
            pa = rot_f @ (la + (lb - la) * (lo / mesh.edges[eid].length)) + trans_f
            pb = rot_f @ (la + (lb - la) * (hi / mesh.edges[eid].length)) + trans_f
            face_g = all_frags[gi].face_id
            ga, gb = local_pos(face_g, a), local_pos(face_g, b)
            sa = ga + (gb - ga) * (lo / mesh.edges[eid].length)
            sb2 = ga + (gb - ga) * (hi / mesh.edges[eid].length)
            rot, trans = _direct_isometry(sa, sb2, pa, pb)
            placed[gi] = (rot, trans)
            order.append(gi)
            tree_arcs.add((min(fi, gi), max(fi, gi), eid))
            queue.append(gi)
    if len(placed) != len(all_frags):
        raise BandCollision("net is disconnected (a flap lost its attachment)")

    # every non-tree gluing must be consistent
    cons_tol = CONSISTENCY_TOL_FACTOR * max(mesh.bbox_diameter, 1.0)
    for fi, gi, eid, lo, hi in arcs:
        if (min(fi, gi), max(fi, gi), eid) in tree_arcs:
            continue
        a, b = mesh.edges[eid].endpoints
        for t in (lo, hi):
            pts = []
            for idx in (fi, gi):
                face_id = all_frags[idx].face_id
                la, lb = local_pos(face_id, a), local_pos(face_id, b)
                rot, trans = placed[idx]
                pts.append(rot @ (la + (lb - la) * (t / mesh.edges[eid].length))
                           + trans)
            if float(np.linalg.norm(pts[0] - pts[1])) > cons_tol:
                raise InconsistentLayout(
                    "general net gluing is inconsistent (banding left "
                    "residual curvature in a loop)")

    pieces = []
    for idx in order:
        frag = all_frags[idx]
        rot, trans = placed[idx]
        pieces.append(NetPiece(frag.face_id, frag.kind,
                               frag.polygon @ rot.T + trans))
    gluings = sorted(
        (min(order.index(fi), order.index(gi)),
         max(order.index(fi), order.index(gi)), eid)
        for fi, gi, eid, lo, hi in arcs
    )

    total = sum(abs(polygon_area(p.polygon)) for p in pieces)
    surface = mesh.surface_area()
    if abs(total - surface) > 1e-9 * surface:
        raise BandCollision(
            f"net area {total} does not match surface area {surface}")

    report = overlap_report_for_polygons([p.polygon for p in pieces])
    if report.is_overlapping:
        raise BandCollision(
            f"net pieces overlap (max intersection area {report.max_area:.3e})")
    return GeneralNet(pieces, gluings, band_width, band_skew_deg, total, report)


# ---------------------------------------------------------------------------
# single straight cut of an open fan
# ---------------------------------------------------------------------------

@dataclass
class FanCutResult:
    pieces: list[np.ndarray]   # placed polygons, in fan order from the cut
    overlap: OverlapReport
    wedge_angle_deg: float     # angular extent of the overlap at the center
    total_angle_deg: float


def _fan_center(mesh: PolyhedronMesh) -> int:
    interior = mesh.interior_vertex_ids()
    if len(interior) != 1:
        raise UnunfoldError("not a fan mesh (needs exactly one interior vertex)")
    v = interior[0]
    if any(v not in f.vertex_loop for f in mesh.faces):
        raise UnunfoldError("not a fan mesh (all faces must share the center)")
    return v


def unfold_fan_single_general_cut(mesh: PolyhedronMesh,
                                  cut_direction_deg: float) -> FanCutResult:
    """Cut a fan from its center straight to the rim and develop it.

    ``cut_direction_deg`` is the intrinsic angle around the center, in
    [0, total); directions hitting a spoke reproduce the single-spoke edge
    cutting, others split one face into two sub-triangles.  The developed
    pieces sweep the full angle sum at the center, so a center of
    curvature k < 0 overlaps itself in a wedge of exactly |k|, no matter
    where the cut is made.
    """
    v = _fan_center(mesh)
    fan = mesh.vertex_fans[v]
    total = sum(fan.angles)
    total_deg = math.degrees(total)
    direction = math.radians(cut_direction_deg) % total

    local = [mesh.face_local_coords(f) for f in range(mesh.face_count)]

    def vertex_local(face_id, vertex_id):
        return local[face_id][mesh.faces[face_id].vertex_loop.index(vertex_id)]

    # walk the fan to find the face containing the cut direction
    acc = 0.0
    k = 0
    while k < len(fan.face_ids) - 1 and acc + fan.angles[k] <= direction + 1e-12:
        acc += fan.angles[k]
        k += 1
    delta = direction - acc  # angle inside face k, from its entry edge

    # build the piece list in face-local terms: (face, polygon, entry edge
    # endpoints on the previous piece)
    entry_edges = list(fan.edge_ids)  # open fan: len = faces + 1
    faces = list(fan.face_ids)
    if delta <= 1e-12 or fan.angles[k] - delta <= 1e-12:
        split = None
    else:
        fid = faces[k]
        floop = mesh.faces[fid].vertex_loop
        e_entry = mesh.edges[entry_edges[k]]
        w_entry = next(w for w in e_entry.endpoints if w != v)
        others = [w for w in floop if w not in (v, w_entry)]
        w_exit = others[0]
        pv = vertex_local(fid, v)
        p_entry = vertex_local(fid, w_entry)
        p_exit = vertex_local(fid, w_exit)
        u = p_entry - pv
        ang = math.atan2(u[1], u[0])
        # rotate toward the exit side
        sign = 1.0 if _cross(u, p_exit - pv) > 0 else -1.0
        ray = np.array([math.cos(ang + sign * delta),
                        math.sin(ang + sign * delta)])
        t = _ray_segment_intersection(pv, ray, p_entry, p_exit)
        if t is None:
            raise UnunfoldError("cut ray misses the rim")
        split = (k, pv, p_entry, p_exit, pv + t * ray)

    # assemble pieces as (local polygon, shared-edge point pair with the
    # previous piece); the chain starts just past the cut
    pieces_local: list[tuple[int, np.ndarray]] = []
    joints: list[tuple[np.ndarray, np.ndarray]] = []  # local pts twice

    def face_poly(fid):
        return local[fid]

    n_faces = len(faces)
    if split is None:
        # cut along the spoke entering face k
        start = k if delta <= 1e-12 else (k + 1) % n_faces
        ordered = [faces[(start + i) % n_faces] for i in range(n_faces)]
        pieces_local = [(fid, face_poly(fid)) for fid in ordered]
    else:
        _, pv, p_entry, p_exit, pcut = split
        fid = faces[k]
        poly_first = np.array([pv, pcut, p_exit]) \
            if _cross(pcut - pv, p_exit - pv) > 0 else np.array([pv, p_exit, pcut])
        poly_last = np.array([pv, p_entry, pcut]) \
            if _cross(p_entry - pv, pcut - pv) > 0 else np.array([pv, pcut, p_entry])
        ordered = [faces[(k + 1 + i) % n_faces] for i in range(n_faces - 1)]
        pieces_local = ([(fid, poly_first)]
                        + [(f, face_poly(f)) for f in ordered]
                        + [(fid, poly_last)])

    # place the chain: consecutive pieces share the spoke between them
    placed_polys: list[np.ndarray] = []
    prev_fid = None
    prev_rot, prev_trans = np.eye(2), np.zeros(2)
    for idx, (fid, poly) in enumerate(pieces_local):
        if idx == 0:
            rot, trans = np.eye(2), np.zeros(2)
        else:
            shared = _shared_spoke(mesh, v, prev_fid, fid, fan)
            w = next(w for w in mesh.edges[shared].endpoints if w != v)
            dst_v = prev_rot @ vertex_local(prev_fid, v) + prev_trans
            dst_w = prev_rot @ vertex_local(prev_fid, w) + prev_trans
            rot, trans = _direct_isometry(vertex_local(fid, v),
                                          vertex_local(fid, w), dst_v, dst_w)
        placed_polys.append(poly @ rot.T + trans)
        prev_fid, prev_rot, prev_trans = fid, rot, trans

    report = overlap_report_for_polygons(placed_polys)
    wedge = 0.0
    if report.is_overlapping:
        # the center's placed position is shared by every piece
        fid0 = pieces_local[0][0]
        center = placed_polys[0][_poly_vertex_index(pieces_local[0][1],
                                                    vertex_local(fid0, v))]
        i, j, _ = max(report.overlapping_pairs, key=lambda t: t[2])
        inter = convex_intersection(placed_polys[i], placed_polys[j])
        wedge = _wedge_angle_at(inter, center)
    return FanCutResult(placed_polys, report, math.degrees(wedge),
                        total_deg)


def _cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def _ray_segment_intersection(origin, direction, a, b):
    """Parameter t > 0 with origin + t*direction on segment ab, or None."""
    seg = b - a
    denom = _cross(direction, seg)
    if abs(denom) < 1e-15:
        return None
    t = _cross(a - origin, seg) / denom
    s = _cross(a - origin, direction) / denom
    if t <= 0 or not (0.0 <= s <= 1.0):
        return None
    return t


def _shared_spoke(mesh, v, f, g, fan):
    for eid in fan.edge_ids:
        e = mesh.edges[eid]
        if len(e.faces) == 2 and set(e.faces) == {f, g}:
            return eid
    raise UnunfoldError("fan pieces do not share a spoke")


def _poly_vertex_index(poly, pt):
    for i, p in enumerate(poly):
        if np.linalg.norm(p - pt) < 1e-12:
            return i
    raise UnunfoldError("vertex not on polygon")


def _wedge_angle_at(inter: np.ndarray, center: np.ndarray) -> float:
    """Angle subtended at ``center`` by the two intersection-polygon edges
    incident to it."""
    k = len(inter)
    for i in range(k):
        if np.linalg.norm(inter[i] - center) < 1e-9:
            u = inter[(i + 1) % k] - inter[i]
            w = inter[(i - 1) % k] - inter[i]
            cosang = float(u @ w) / (np.linalg.norm(u) * np.linalg.norm(w))
            return math.acos(min(1.0, max(-1.0, cosang)))
    return 0.0
