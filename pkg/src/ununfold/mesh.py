"""Immutable polyhedral-surface model with validation and intrinsic queries.

A :class:`PolyhedronMesh` is built once by :func:`build_mesh` from vertex
positions and face loops (counterclockwise as seen from outside) and is
never mutated afterwards.  All downstream unfolding math consumes only the
intrinsic data stored here (face polygons, angles, adjacency), so the same
mesh object can be shared read-only across any number of workers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BoundaryVertex,
    DisconnectedSurface,
    InconsistentOrientation,
    NonConvexFace,
    NonManifoldEdge,
    NonManifoldVertex,
    NonPlanarFace,
    OpenMesh,
)

# Coplanarity tolerance is scaled by the bounding-box diameter; angle
# tolerances are absolute radians.  Constructions are evaluated in double
# precision from closed-form trigonometry, so 1e-9 leaves ample headroom.
PLANE_TOL_FACTOR = 1e-9
ANGLE_TOL = 1e-9


@dataclass(frozen=True)
class Vertex:
    id: int
    position: np.ndarray  # shape (3,)


@dataclass(frozen=True)
class Face:
    """One strictly convex planar face.

    ``angles[i]`` is the interior angle (radians) at ``vertex_loop[i]``;
    ``edge_lengths[i]`` is the length of the directed side
    ``vertex_loop[i] -> vertex_loop[i+1]``.
    """

    id: int
    vertex_loop: tuple[int, ...]
    angles: tuple[float, ...]
    edge_lengths: tuple[float, ...]
    normal: np.ndarray  # unit, outward

    def angle_at(self, vertex_id: int) -> float:
        return self.angles[self.vertex_loop.index(vertex_id)]

    def loop_edges(self) -> list[tuple[int, int]]:
        loop = self.vertex_loop
        return [(loop[i], loop[(i + 1) % len(loop)]) for i in range(len(loop))]


@dataclass(frozen=True)
class Edge:
    id: int
    endpoints: tuple[int, int]  # sorted pair
    faces: tuple[int, ...]      # one or two incident face ids
    length: float

    @property
    def is_boundary(self) -> bool:
        return len(self.faces) == 1


@dataclass(frozen=True)
class VertexFan:
    """Incident faces of a vertex in rotational order.

    For an interior vertex the fan is cyclic: ``edge_ids[i]`` separates
    ``face_ids[i-1]`` from ``face_ids[i]`` and ``len(edge_ids) ==
    len(face_ids)``.  For a boundary vertex the fan is open:
    ``edge_ids`` has one more entry than ``face_ids`` and its first and
    last entries are boundary edges.  ``angles[i]`` is the interior angle
    of ``face_ids[i]`` at the vertex.
    """

    face_ids: tuple[int, ...]
    edge_ids: tuple[int, ...]
    angles: tuple[float, ...]
    is_closed: bool


@dataclass(frozen=True)
class Graph:
    """Plain undirected multigraph; ``edges[i]`` is the vertex pair of edge i.

    For graphs extracted from a mesh, edge index i corresponds to mesh
    edge id i (dual graphs keep the primal edge id in ``edge_labels``).
    """

    vertex_count: int
    edges: tuple[tuple[int, int], ...]
    edge_labels: tuple[int, ...] = ()

    def adjacency(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.vertex_count)]
        for i, (u, v) in enumerate(self.edges):
            adj[u].append((v, i))
            adj[v].append((u, i))
        return adj

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        adj = self.adjacency()
        seen = [False] * self.vertex_count
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count == self.vertex_count


class PolyhedronMesh:
    """Validated polyhedral surface; see :func:`build_mesh`."""

    def __init__(self, vertices, faces, edges, edge_index, vertex_fans,
                 boundary_edge_ids):
        self.vertices: tuple[Vertex, ...] = vertices
        self.faces: tuple[Face, ...] = faces
        self.edges: tuple[Edge, ...] = edges
        self.edge_index: dict[tuple[int, int], int] = edge_index
        self.vertex_fans: tuple[VertexFan, ...] = vertex_fans
        self.boundary_edge_ids: frozenset[int] = boundary_edge_ids
        self.positions = np.array([v.position for v in vertices])
        self.is_closed = not boundary_edge_ids
        lo = self.positions.min(axis=0)
        hi = self.positions.max(axis=0)
        self.bbox_diameter = float(np.linalg.norm(hi - lo))

    # --- counts -----------------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def euler_characteristic(self) -> int:
        return self.vertex_count - self.edge_count + self.face_count

    def genus(self) -> int:
        if not self.is_closed:
            raise OpenMesh("genus is defined for closed meshes only")
        chi = self.euler_characteristic()
        return (2 - chi) // 2

    # --- per-vertex intrinsic data -----------------------------------------

    def is_boundary_vertex(self, vertex_id: int) -> bool:
        return not self.vertex_fans[vertex_id].is_closed

    def angle_sum(self, vertex_id: int) -> float:
        """Sum of interior face angles at the vertex (defined on the
        boundary too; used for corner bookkeeping)."""
        return sum(self.vertex_fans[vertex_id].angles)

    def curvature(self, vertex_id: int) -> float:
        """Angle defect 2*pi - angle_sum; undefined on the boundary."""
        if self.is_boundary_vertex(vertex_id):
            raise BoundaryVertex(f"vertex {vertex_id} is on the boundary")
        return 2 * math.pi - self.angle_sum(vertex_id)

    def total_curvature(self) -> float:
        """Sum of angle defects; 4*pi for a closed genus-0 surface."""
        if not self.is_closed:
            raise OpenMesh("total curvature requires a closed mesh")
        return sum(self.curvature(v.id) for v in self.vertices)

    def interior_vertex_ids(self) -> list[int]:
        return [v.id for v in self.vertices if not self.is_boundary_vertex(v.id)]

    # --- geometry -----------------------------------------------------------

    def face_points(self, face_id: int) -> np.ndarray:
        return self.positions[list(self.faces[face_id].vertex_loop)]

    def face_area(self, face_id: int) -> float:
        pts = self.face_points(face_id)
        total = np.zeros(3)
        for i in range(1, len(pts) - 1):
            total += np.cross(pts[i] - pts[0], pts[i + 1] - pts[0])
        return 0.5 * float(np.linalg.norm(total))

    def surface_area(self) -> float:
        return sum(self.face_area(f.id) for f in self.faces)

    def face_local_coords(self, face_id: int) -> np.ndarray:
        """Develop the face into 2D, orientation preserved.

        Origin at the first loop vertex, x-axis along the first side; the
        loop comes out counterclockwise because it is counterclockwise
        around the outward normal in 3D.
        """
        face = self.faces[face_id]
        pts = self.face_points(face_id)
        e1 = pts[1] - pts[0]
        e1 = e1 / np.linalg.norm(e1)
        e2 = np.cross(face.normal, e1)
        rel = pts - pts[0]
        return np.column_stack([rel @ e1, rel @ e2])


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def _newell_normal(pts: np.ndarray) -> np.ndarray:
    n = np.zeros(3)
    k = len(pts)
    for i in range(k):
        p, q = pts[i], pts[(i + 1) % k]
        n += np.cross(p, q)
    norm = np.linalg.norm(n)
    if norm == 0:
        raise NonConvexFace("degenerate face (zero area)")
    return n / norm


def _face_geometry(face_id, loop, positions, plane_tol):
    pts = positions[list(loop)]
    normal = _newell_normal(pts)
    centroid = pts.mean(axis=0)
    deviation = np.abs((pts - centroid) @ normal).max()
    if deviation > plane_tol:
        raise NonPlanarFace(
            f"face {face_id} deviates {deviation:.3e} from its plane")
    k = len(loop)
    angles = []
    lengths = []
    for i in range(k):
        p = pts[i]
        prev_v = pts[(i - 1) % k] - p
        next_v = pts[(i + 1) % k] - p
        lengths.append(float(np.linalg.norm(next_v)))
        cosang = np.dot(prev_v, next_v) / (
            np.linalg.norm(prev_v) * np.linalg.norm(next_v))
        angle = math.acos(min(1.0, max(-1.0, cosang)))
        # strict convexity: the loop must turn left at every vertex
        # (incoming direction is -prev_v, outgoing is next_v)
        turn = np.dot(np.cross(-prev_v, next_v), normal)
        if turn <= 0 or angle >= math.pi - ANGLE_TOL or angle <= ANGLE_TOL:
            raise NonConvexFace(
                f"face {face_id} is not strictly convex at loop position {i}")
        angles.append(angle)
    return normal, tuple(angles), tuple(lengths)


def _build_vertex_fan(vertex_id, incident, edge_of):
    """Order the incident faces of one vertex into a fan.

    ``incident`` maps face_id -> (prev_vertex, next_vertex) in that face's
    loop around ``vertex_id``.  Faces are chained across shared edges; the
    walk follows each face's outgoing side, which yields a consistent
    rotational order for consistently oriented faces.
    """
    by_edge: dict[int, list[int]] = {}
    for f, (p, n) in incident.items():
        for other in (p, n):
            by_edge.setdefault(edge_of(vertex_id, other), []).append(f)
    for eid, fs in by_edge.items():
        if len(fs) > 2:
            raise NonManifoldEdge(f"edge {eid} incident to >2 faces at vertex fan")
    boundary_here = sorted(e for e, fs in by_edge.items() if len(fs) == 1)
    if boundary_here and len(boundary_here) != 2:
        raise NonManifoldVertex(
            f"vertex {vertex_id} has {len(boundary_here)} boundary edges")

    def next_face(face, via_edge):
        fs = by_edge[via_edge]
        for g in fs:
            if g != face:
                return g
        return None

    if boundary_here:
        # open fan: walk from one boundary edge to the other
        start_edge = boundary_here[0]
        face = by_edge[start_edge][0]
        order_f, order_e = [face], [start_edge]
        p, n = incident[face]
        e_prev = edge_of(vertex_id, p)
        e_next = edge_of(vertex_id, n)
        cur_edge = e_next if e_prev == start_edge else e_prev
        while True:
            order_e.append(cur_edge)
            nxt = next_face(face, cur_edge)
            if nxt is None:
                break
            face = nxt
            order_f.append(face)
            p, n = incident[face]
            ep, en = edge_of(vertex_id, p), edge_of(vertex_id, n)
            cur_edge = en if ep == cur_edge else ep
        if len(order_f) != len(incident):
            raise NonManifoldVertex(
                f"vertex {vertex_id}: incident faces do not form a single fan")
        return order_f, order_e, False
    else:
        # cyclic fan: start at the lowest face id for determinism
        start = min(incident)
        face = start
        p, n = incident[face]
        entry = edge_of(vertex_id, p)
        order_f, order_e = [], []
        while True:
            order_f.append(face)
            order_e.append(entry)
            p, n = incident[face]
            ep, en = edge_of(vertex_id, p), edge_of(vertex_id, n)
            exit_edge = en if ep == entry else ep
            nxt = next_face(face, exit_edge)
            if nxt is None:
                raise NonManifoldVertex(
                    f"vertex {vertex_id}: broken interior fan")
            if nxt == start:
                break
            face, entry = nxt, exit_edge
        if len(order_f) != len(incident):
            raise NonManifoldVertex(
                f"vertex {vertex_id}: incident faces do not form a single cycle")
        return order_f, order_e, True


def build_mesh(vertices: Sequence[Sequence[float]],
               faces: Sequence[Sequence[int]]) -> PolyhedronMesh:
    """Validate and index a polyhedral surface.

    ``faces`` are vertex-id loops, counterclockwise as seen from outside.
    Raises NonManifoldEdge / NonPlanarFace / NonConvexFace /
    DisconnectedSurface / InconsistentOrientation / NonManifoldVertex on
    invalid input.  Edge ids are assigned in sorted endpoint-pair order,
    so they are deterministic for a given vertex/face list.
    """
    positions = np.asarray(vertices, dtype=float)
    if positions.ndim != 2 or positions.shape[1] != 3:
        raise ValueError("vertices must be an (N, 3) array-like")
    if not np.isfinite(positions).all():
        raise ValueError("vertex positions must be finite")
    if len(faces) < 1:
        raise ValueError("at least one face required")
    nv = len(positions)

    loops: list[tuple[int, ...]] = []
    for fid, loop in enumerate(faces):
        loop = tuple(int(v) for v in loop)
        if len(loop) < 3:
            raise ValueError(f"face {fid} has fewer than 3 vertices")
        if len(set(loop)) != len(loop):
            raise ValueError(f"face {fid} repeats a vertex")
        if any(v < 0 or v >= nv for v in loop):
            raise ValueError(f"face {fid} references a vertex out of range")
        loops.append(loop)

    # edge table keyed by sorted endpoint pair; directed occurrences are
    # tracked to detect orientation conflicts
    undirected: dict[tuple[int, int], list[int]] = {}
    directed: dict[tuple[int, int], int] = {}
    for fid, loop in enumerate(loops):
        k = len(loop)
        for i in range(k):
            a, b = loop[i], loop[(i + 1) % k]
            key = (a, b) if a < b else (b, a)
            undirected.setdefault(key, []).append(fid)
            if len(undirected[key]) > 2:
                raise NonManifoldEdge(
                    f"edge {key} is shared by more than two faces")
            if (a, b) in directed:
                raise InconsistentOrientation(
                    f"edge {a}->{b} traversed twice in the same direction "
                    f"(faces {directed[(a, b)]} and {fid})")
            directed[(a, b)] = fid

    lo, hi = positions.min(axis=0), positions.max(axis=0)
    diameter = float(np.linalg.norm(hi - lo))
    plane_tol = PLANE_TOL_FACTOR * max(diameter, 1.0)

    face_objs = []
    for fid, loop in enumerate(loops):
        normal, angles, lengths = _face_geometry(fid, loop, positions, plane_tol)
        face_objs.append(Face(fid, loop, angles, lengths, normal))

    edge_keys = sorted(undirected)
    edge_index = {key: i for i, key in enumerate(edge_keys)}
    edge_objs = []
    boundary_ids = set()
    for i, key in enumerate(edge_keys):
        fs = tuple(sorted(undirected[key]))
        length = float(np.linalg.norm(positions[key[0]] - positions[key[1]]))
        if length <= 0:
            raise ValueError(f"edge {key} has zero length")
        edge_objs.append(Edge(i, key, fs, length))
        if len(fs) == 1:
            boundary_ids.add(i)

    # face-adjacency connectivity
    parent = list(range(len(loops)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edge_objs:
        if len(e.faces) == 2:
            a, b = find(e.faces[0]), find(e.faces[1])
            if a != b:
                parent[a] = b
    if len({find(f) for f in range(len(loops))}) != 1:
        raise DisconnectedSurface("face adjacency graph is not connected")

    # vertex fans (also enforces single-fan manifoldness per vertex)
    incident_at: list[dict[int, tuple[int, int]]] = [dict() for _ in range(nv)]
    for fid, loop in enumerate(loops):
        k = len(loop)
        for i, v in enumerate(loop):
            incident_at[v][fid] = (loop[(i - 1) % k], loop[(i + 1) % k])

    def edge_of(a, b):
        return edge_index[(a, b) if a < b else (b, a)]

    fans = []
    for vid in range(nv):
        if not incident_at[vid]:
            raise ValueError(f"vertex {vid} belongs to no face")
        order_f, order_e, closed = _build_vertex_fan(vid, incident_at[vid], edge_of)
        angles = tuple(face_objs[f].angle_at(vid) for f in order_f)
        fans.append(VertexFan(tuple(order_f), tuple(order_e), angles, closed))

    vertex_objs = tuple(Vertex(i, positions[i].copy()) for i in range(nv))
    mesh = PolyhedronMesh(vertex_objs, tuple(face_objs), tuple(edge_objs),
                          edge_index, tuple(fans), frozenset(boundary_ids))

    # closed meshes must be oriented outward (positive enclosed volume)
    if mesh.is_closed:
        vol = 0.0
        for f in face_objs:
            pts = positions[list(f.vertex_loop)]
            for i in range(1, len(pts) - 1):
                vol += np.dot(pts[0], np.cross(pts[i], pts[i + 1]))
        if vol <= 0:
            raise InconsistentOrientation(
                "closed mesh is oriented inward (negative volume)")
    return mesh


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------

def skeleton_graph(mesh: PolyhedronMesh) -> Graph:
    """1-skeleton: mesh vertices and edges, edge index i = mesh edge id i."""
    return Graph(mesh.vertex_count,
                 tuple(e.endpoints for e in mesh.edges),
                 tuple(e.id for e in mesh.edges))


def dual_graph(mesh: PolyhedronMesh) -> Graph:
    """Faces as nodes; one arc per non-boundary edge, labelled by it."""
    edges = []
    labels = []
    for e in mesh.edges:
        if len(e.faces) == 2:
            edges.append(e.faces)
            labels.append(e.id)
    return Graph(mesh.face_count, tuple(edges), tuple(labels))


# ---------------------------------------------------------------------------
# embeddedness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EmbeddingReport:
    violating_pairs: tuple[tuple[int, int], ...]

    @property
    def is_embedded(self) -> bool:
        return not self.violating_pairs


def _clip_interval_on_line(pts, origin, direction, other_normal, other_offset,
                           tol):
    """Intersect a convex polygon with a plane; return the parameter
    interval of the section on the line (origin, direction), or None."""
    dist = pts @ other_normal - other_offset
    k = len(pts)
    crossings = []
    for i in range(k):
        d1, d2 = dist[i], dist[(i + 1) % k]
        if abs(d1) <= tol:
            crossings.append(pts[i])
        if (d1 < -tol and d2 > tol) or (d1 > tol and d2 < -tol):
            t = d1 / (d1 - d2)
            crossings.append(pts[i] + t * (pts[(i + 1) % k] - pts[i]))
    if not crossings:
        return None
    params = [float(np.dot(c - origin, direction)) for c in crossings]
    return min(params), max(params)


def check_embedded(mesh: PolyhedronMesh, tol: float | None = None) -> EmbeddingReport:
    """Pairwise face-face intersection test in 3D.

    A pair violates embeddedness when the faces intersect beyond their
    shared vertices/edges.  The report is empty for an embedded surface.
    """
    if tol is None:
        tol = 1e-9 * max(mesh.bbox_diameter, 1.0)
    violations = []
    face_pts = [mesh.face_points(f.id) for f in mesh.faces]
    boxes = [(p.min(axis=0) - tol, p.max(axis=0) + tol) for p in face_pts]
    for f, g in itertools.combinations(range(mesh.face_count), 2):
        if (boxes[f][0] > boxes[g][1]).any() or (boxes[g][0] > boxes[f][1]).any():
            continue
        if _faces_intersect_improperly(mesh, f, g, face_pts[f], face_pts[g], tol):
            violations.append((f, g))
    return EmbeddingReport(tuple(violations))


def _faces_intersect_improperly(mesh, f, g, pts_f, pts_g, tol):
    from . import unfold  # convex 2D clipping lives with the layout code

    face_f, face_g = mesh.faces[f], mesh.faces[g]
    shared = set(face_f.vertex_loop) & set(face_g.vertex_loop)
    nf, ng = face_f.normal, face_g.normal
    of = float(np.dot(nf, pts_f[0]))
    og = float(np.dot(ng, pts_g[0]))

    cross = np.cross(nf, ng)
    if np.linalg.norm(cross) < 1e-12:
        # parallel planes
        if abs(np.dot(nf, pts_g[0]) - of) > tol:
            return False
        # coplanar: improper iff the interiors overlap with positive area
        e1 = pts_f[1] - pts_f[0]
        e1 = e1 / np.linalg.norm(e1)
        e2 = np.cross(nf, e1)
        a2 = np.column_stack([(pts_f - pts_f[0]) @ e1, (pts_f - pts_f[0]) @ e2])
        b2 = np.column_stack([(pts_g - pts_f[0]) @ e1, (pts_g - pts_f[0]) @ e2])
        if np.dot(ng, nf) < 0:
            b2 = b2[::-1]
        area = unfold.convex_intersection_area(a2, b2)
        return area > tol * tol
    direction = cross / np.linalg.norm(cross)
    origin = pts_f[0]
    int_f = _clip_interval_on_line(pts_f, origin, direction, ng, og, tol)
    if int_f is None:
        return False
    int_g = _clip_interval_on_line(pts_g, origin, direction, nf, of, tol)
    if int_g is None:
        return False
    lo = max(int_f[0], int_g[0])
    hi = min(int_f[1], int_g[1])
    if hi - lo <= tol:
        return False
    # subtract allowed contact: shared edge segment and shared vertices
    allowed = []
    for a, b in itertools.combinations(sorted(shared), 2):
        key = (a, b)
        if key in mesh.edge_index:
            ta = float(np.dot(mesh.positions[a] - origin, direction))
            tb = float(np.dot(mesh.positions[b] - origin, direction))
            allowed.append((min(ta, tb) - tol, max(ta, tb) + tol))
    for v in shared:
        tv = float(np.dot(mesh.positions[v] - origin, direction))
        allowed.append((tv - tol, tv + tol))
    segments = [(lo, hi)]
    for alo, ahi in allowed:
        segments = [
            part
            for s0, s1 in segments
            for part in ((s0, min(s1, alo)), (max(s0, ahi), s1))
            if part[1] - part[0] > tol
        ]
    return bool(segments)


# ---------------------------------------------------------------------------
# topological convexity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexityCertificate:
    genus_zero: bool
    three_connected: bool

    @property
    def is_topologically_convex(self) -> bool:
        return self.genus_zero and self.three_connected


def is_topologically_convex(mesh: PolyhedronMesh) -> ConvexityCertificate:
    """Certificate that the 1-skeleton is the graph of a convex polyhedron.

    Genus 0 plus the face embedding gives planarity; 3-connectivity is
    established by exhaustive removal of every vertex pair (desk-scale
    graphs only, O(V^2 (V+E))).
    """
    if not mesh.is_closed:
        raise OpenMesh("topological convexity requires a closed mesh")
    genus_zero = mesh.genus() == 0
    g = skeleton_graph(mesh)
    n = g.vertex_count
    adj = [[] for _ in range(n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    three = n >= 4
    if three:
        for a, b in itertools.combinations(range(n), 2):
            remaining = [v for v in range(n) if v not in (a, b)]
            start = remaining[0]
            seen = {a, b, start}
            stack = [start]
            count = 1
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        count += 1
                        stack.append(w)
            if count != len(remaining):
                three = False
                break
    return ConvexityCertificate(genus_zero, three)


# ---------------------------------------------------------------------------
# symmetry
# ---------------------------------------------------------------------------

def _quantize(x: float, scale: float) -> int:
    return round(x / (1e-9 * scale))


def symmetry_group(mesh: PolyhedronMesh) -> list[tuple[int, ...]]:
    """All combinatorial automorphisms of the skeleton that preserve edge
    lengths and face angle sequences, as vertex permutations.

    Backtracking over vertex images with invariant filtering; fine for the
    desk-scale meshes in scope (V <= ~40).  The identity is always
    included and the result is sorted.
    """
    n = mesh.vertex_count
    scale = max(mesh.bbox_diameter, 1.0)
    adj: list[dict[int, int]] = [dict() for _ in range(n)]  # neighbor -> length class
    for e in mesh.edges:
        a, b = e.endpoints
        cls = _quantize(e.length, scale)
        adj[a][b] = cls
        adj[b][a] = cls

    def invariant(v):
        fan = mesh.vertex_fans[v]
        return (
            fan.is_closed,
            len(adj[v]),
            _quantize(mesh.angle_sum(v), 1.0),
            tuple(sorted(adj[v].values())),
        )

    invariants = [invariant(v) for v in range(n)]
    candidates = [
        [u for u in range(n) if invariants[u] == invariants[v]]
        for v in range(n)
    ]
    face_by_vertex_set = {frozenset(f.vertex_loop): f for f in mesh.faces}

    def faces_ok(perm):
        for f in mesh.faces:
            image = [perm[v] for v in f.vertex_loop]
            g = face_by_vertex_set.get(frozenset(image))
            if g is None or len(g.vertex_loop) != len(image):
                return False
            # (image, f.angles) must equal (g.loop, g.angles) up to a
            # cyclic rotation, possibly after reversal
            k = len(image)
            gl, ga = g.vertex_loop, g.angles
            matched = False
            for seq, angs in ((image, f.angles),
                              (image[::-1], f.angles[::-1])):
                for shift in range(k):
                    if (all(seq[(i + shift) % k] == gl[i] for i in range(k))
                            and all(abs(angs[(i + shift) % k] - ga[i]) < 1e-8
                                    for i in range(k))):
                        matched = True
                        break
                if matched:
                    break
            if not matched:
                return False
        return True

    results = []
    perm = [-1] * n
    used = [False] * n

    def extend(v):
        if v == n:
            if faces_ok(perm):
                results.append(tuple(perm))
            return
        for u in candidates[v]:
            if used[u]:
                continue
            ok = True
            for w, cls in adj[v].items():
                if perm[w] != -1:
                    if adj[u].get(perm[w]) != cls:
                        ok = False
                        break
            if ok:
                perm[v] = u
                used[u] = True
                extend(v + 1)
                used[u] = False
                perm[v] = -1

    extend(0)
    return sorted(results)
