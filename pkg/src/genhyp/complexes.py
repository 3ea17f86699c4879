"""Combinatorial surfaces: glued triangulations and cellular decompositions.

Triangulated surfaces are given as oriented triangles plus side gluings.
Side ``s`` of a triangle is the side opposite corner ``s``; it runs from
corner ``s+1`` to corner ``s+2`` (indices mod 3).  Gluing ``(t, s)`` to
``(t', s')`` matches the two sides with opposite directions, so corner
``s+1`` of ``t`` meets corner ``s'+2`` of ``t'``.  Edges are first-class:
edge ``k`` is the k-th gluing record.

Cellular surfaces list faces by cyclic boundary and edges by endpoints and
adjacent faces.  Each face ``f`` carries one dual vertex ``f*``.
"""
from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Sequence, Tuple

from .errors import ParseError, SizeError, ValidationError

TRI_FORMAT = "genhyp-tri/1"
CELL_FORMAT = "genhyp-cell/1"


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)

    def n_classes(self):
        return len({self.find(a) for a in range(len(self.parent))})


def _index(ids, what):
    out = {}
    for k, x in enumerate(ids):
        if not isinstance(x, (str, int)) or isinstance(x, bool):
            raise ValidationError(f"{what} id {x!r} must be a string or integer")
        if x in out:
            raise ValidationError(f"duplicate {what} id {x!r}")
        out[x] = k
    return out


class TriangulatedSurface:
    """A closed surface glued from oriented triangles."""

    def __init__(self, vertices, triangles, gluings):
        self.vertices = tuple(vertices)
        self.triangles = tuple((tid, tuple(c)) for tid, c in triangles)
        self.gluings = tuple((tuple(a), tuple(b)) for a, b in gluings)
        self.vertex_index = _index(self.vertices, "vertex")
        self.triangle_index = _index([t for t, _ in self.triangles], "triangle")
        self._validate()

    def _validate(self):
        nt = len(self.triangles)
        if nt == 0:
            raise ValidationError("no triangles")
        corners = []
        for tid, c in self.triangles:
            if len(c) != 3:
                raise ValidationError(f"triangle {tid!r} needs three corners")
            try:
                corners.append(tuple(self.vertex_index[v] for v in c))
            except KeyError as exc:
                raise ValidationError(f"triangle {tid!r} uses unknown vertex {exc.args[0]!r}") from None
        self.corners = tuple(corners)
        edge_of = [[None] * 3 for _ in range(nt)]
        sides = []
        for k, (a, b) in enumerate(self.gluings):
            pair = []
            for tid, s in (a, b):
                if tid not in self.triangle_index:
                    raise ValidationError(f"gluing {k} names unknown triangle {tid!r}")
                if s not in (0, 1, 2) or isinstance(s, bool):
                    raise ValidationError(f"gluing {k} has side {s!r}, expected 0, 1 or 2")
                t = self.triangle_index[tid]
                if edge_of[t][s] is not None:
                    raise ValidationError(f"side {s} of triangle {tid!r} is glued more than once")
                edge_of[t][s] = k
                pair.append((t, s))
            sides.append(tuple(pair))
        for t, row in enumerate(edge_of):
            for s, e in enumerate(row):
                if e is None:
                    raise ValidationError(f"side {s} of triangle {self.triangles[t][0]!r} is not glued")
        self.edge_of = tuple(tuple(r) for r in edge_of)
        self.edge_sides = tuple(sides)

        uf = _UnionFind(3 * nt)
        for (t, s), (t2, s2) in self.edge_sides:
            uf.union(3 * t + (s + 1) % 3, 3 * t2 + (s2 + 2) % 3)
            uf.union(3 * t + (s + 2) % 3, 3 * t2 + (s2 + 1) % 3)
        label = {}
        for t in range(nt):
            for c in range(3):
                root = uf.find(3 * t + c)
                v = self.corners[t][c]
                if label.setdefault(root, v) != v:
                    raise ValidationError(
                        f"gluings identify corners labelled {self.vertices[label[root]]!r} and {self.vertices[v]!r}"
                    )
        if len(set(label.values())) != len(label):
            raise ValidationError("a vertex label is used by corners that the gluings keep apart")
        if set(label.values()) != set(range(len(self.vertices))):
            raise ValidationError("some listed vertex is not a corner of any triangle")

        tf = _UnionFind(nt)
        for (t, _), (t2, _) in self.edge_sides:
            tf.union(t, t2)
        if tf.n_classes() != 1:
            raise ValidationError("the glued complex is not connected")
        if self.euler_characteristic > 2:
            raise ValidationError(f"Euler characteristic {self.euler_characteristic} is not that of a closed surface")

        vc = [[] for _ in self.vertices]
        for t, c in enumerate(self.corners):
            for i, v in enumerate(c):
                vc[v].append((t, i))
        self.vertex_corners = tuple(tuple(x) for x in vc)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.gluings)

    @property
    def n_faces(self):
        return len(self.triangles)

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def punctured_euler_characteristic(self):
        """Euler characteristic after removing the vertices."""
        return self.n_faces - self.n_edges

    @property
    def edge_ids(self):
        return list(range(self.n_edges))

    def side_vertices(self, t, s):
        c = self.corners[t]
        return c[(s + 1) % 3], c[(s + 2) % 3]

    def other_side(self, t, s):
        a, b = self.edge_sides[self.edge_of[t][s]]
        if a == (t, s):
            return b
        return a

    def to_dict(self):
        return {
            "format": TRI_FORMAT,
            "vertices": list(self.vertices),
            "triangles": [{"id": tid, "corners": list(c)} for tid, c in self.triangles],
            "gluings": [{"left": list(a), "right": list(b)} for a, b in self.gluings],
        }

    def __eq__(self, other):
        return isinstance(other, TriangulatedSurface) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"TriangulatedSurface(V={self.n_vertices}, E={self.n_edges}, F={self.n_faces})"


@dataclass(frozen=True)
class Quadrilateral:
    """The quadrilateral (v, v2, f*, f2*) around one edge."""

    edge: object
    v: object
    v2: object
    f: object
    f2: object


class CellularSurface:
    """A cellular decomposition of a closed surface with its dual vertices."""

    def __init__(self, vertices, faces, edges):
        self.vertices = tuple(vertices)
        self.faces = tuple((fid, tuple(b)) for fid, b in faces)
        self.edges = tuple((eid, tuple(ends), tuple(fs)) for eid, ends, fs in edges)
        self.vertex_index = _index(self.vertices, "vertex")
        self.face_index = _index([f for f, _ in self.faces], "face")
        self.edge_index = _index([e for e, _, _ in self.edges], "edge")
        self._validate()

    def _validate(self):
        if not self.faces:
            raise ValidationError("no faces")
        for fid, b in self.faces:
            if len(b) < 2:
                raise ValidationError(f"face {fid!r} has a boundary shorter than 2")
            for v in b:
                if v not in self.vertex_index:
                    raise ValidationError(f"face {fid!r} uses unknown vertex {v!r}")
        count = {f: 0 for f, _ in self.faces}
        used = set()
        for eid, ends, fs in self.edges:
            if len(ends) != 2 or len(fs) != 2:
                raise ValidationError(f"edge {eid!r} needs two ends and two faces")
            for v in ends:
                if v not in self.vertex_index:
                    raise ValidationError(f"edge {eid!r} uses unknown vertex {v!r}")
                used.add(v)
            for f in fs:
                if f not in self.face_index:
                    raise ValidationError(f"edge {eid!r} names unknown face {f!r}")
                count[f] += 1
                b = self.faces[self.face_index[f]][1]
                n = len(b)
                pairs = {(b[i], b[(i + 1) % n]) for i in range(n)} | {(b[(i + 1) % n], b[i]) for i in range(n)}
                if tuple(ends) not in pairs:
                    raise ValidationError(f"bad boundary: ends of edge {eid!r} are not consecutive in face {f!r}")
        for fid, b in self.faces:
            if count[fid] != len(b):
                raise ValidationError(
                    f"bad boundary: face {fid!r} has {len(b)} boundary slots but {count[fid]} edge incidences"
                )
        if used != set(self.vertices):
            raise ValidationError("some listed vertex lies on no edge")
        nv, nf = len(self.vertices), len(self.faces)
        uf = _UnionFind(nv + nf)
        for _, ends, fs in self.edges:
            a, b = (self.vertex_index[v] for v in ends)
            uf.union(a, b)
            for f in fs:
                uf.union(a, nv + self.face_index[f])
        if uf.n_classes() != 1:
            raise ValidationError("the complex is not connected")
        if self.euler_characteristic > 2:
            raise ValidationError(f"Euler characteristic {self.euler_characteristic} is not that of a closed surface")

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def face_ids(self):
        return [f for f, _ in self.faces]

    @property
    def edge_ids(self):
        return [e for e, _, _ in self.edges]

    def quadrilaterals(self) -> List[Quadrilateral]:
        return quadrilaterals(self)

    def to_dict(self):
        return {
            "format": CELL_FORMAT,
            "vertices": list(self.vertices),
            "faces": [{"id": f, "boundary": list(b)} for f, b in self.faces],
            "edges": [{"id": e, "ends": list(en), "faces": list(fs)} for e, en, fs in self.edges],
        }

    def __eq__(self, other):
        return isinstance(other, CellularSurface) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"CellularSurface(V={self.n_vertices}, E={self.n_edges}, F={self.n_faces})"


def quadrilaterals(surface: CellularSurface) -> List[Quadrilateral]:
    """One quadrilateral per edge, with the first listed end as base corner."""
    return [Quadrilateral(e, ends[0], ends[1], fs[0], fs[1]) for e, ends, fs in surface.edges]


# loading and saving -------------------------------------------------------------

def _read_json(source):
    if isinstance(source, dict):
        return source
    try:
        if isinstance(source, (str, os.PathLike)):
            with open(source, encoding="utf-8") as fh:
                return json.load(fh)
        return json.load(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from None
    except OSError as exc:
        raise ParseError(f"cannot read {source!r}: {exc}") from None


def _need(doc, key, kind):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"missing key {key!r}")
    if not isinstance(doc[key], kind):
        raise ParseError(f"key {key!r} has the wrong JSON type")
    return doc[key]


def triangulated_from_dict(doc) -> TriangulatedSurface:
    if not isinstance(doc, dict) or doc.get("format") != TRI_FORMAT:
        raise ParseError(f"expected format {TRI_FORMAT!r}")
    verts = _need(doc, "vertices", list)
    tris = []
    for t in _need(doc, "triangles", list):
        tris.append((_need(t, "id", (str, int)), _need(t, "corners", list)))
    glue = []
    for g in _need(doc, "gluings", list):
        a, b = _need(g, "left", list), _need(g, "right", list)
        if len(a) != 2 or len(b) != 2:
            raise ParseError("gluing sides must be [triangle, side] pairs")
        glue.append((a, b))
    return TriangulatedSurface(verts, tris, glue)


def cellular_from_dict(doc) -> CellularSurface:
    if not isinstance(doc, dict) or doc.get("format") != CELL_FORMAT:
        raise ParseError(f"expected format {CELL_FORMAT!r}")
    verts = _need(doc, "vertices", list)
    faces = [(_need(f, "id", (str, int)), _need(f, "boundary", list)) for f in _need(doc, "faces", list)]
    edges = [
        (_need(e, "id", (str, int)), _need(e, "ends", list), _need(e, "faces", list)) for e in _need(doc, "edges", list)
    ]
    return CellularSurface(verts, faces, edges)


def load_triangulated(source) -> TriangulatedSurface:
    """Load a ``genhyp-tri/1`` file from a path, stream or parsed dict."""
    return triangulated_from_dict(_read_json(source))


def load_cellular(source) -> CellularSurface:
    """Load a ``genhyp-cell/1`` file from a path, stream or parsed dict."""
    return cellular_from_dict(_read_json(source))


def load_surface(source):
    doc = _read_json(source)
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt == TRI_FORMAT:
        return triangulated_from_dict(doc)
    if fmt == CELL_FORMAT:
        return cellular_from_dict(doc)
    raise ParseError(f"unknown format {fmt!r}")


def dumps(surface) -> str:
    return json.dumps(surface.to_dict(), indent=1)


def load_values(source, key) -> Dict[str, float]:
    """Read ``{key: {id: number}}`` as a map from string id to float."""
    doc = _read_json(source)
    table = _need(doc, key, dict)
    out = {}
    for k, v in table.items():
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ParseError(f"value for {k!r} is not a number")
        out[str(k)] = float(v)
    return out


def values_by_id(ids, table, what) -> List[float]:
    """Order a string-keyed table along ``ids``; every id must be present."""
    out = []
    for i in ids:
        if str(i) not in table:
            raise ValidationError(f"no {what} value for id {i!r}")
        out.append(table[str(i)])
    extra = set(table) - {str(i) for i in ids}
    if extra:
        raise ValidationError(f"{what} values for unknown ids {sorted(extra)}")
    return out


# builders -------------------------------------------------------------------------

def from_oriented_faces(faces: Sequence[Sequence], vertices=None) -> TriangulatedSurface:
    """Glue consistently oriented triangles along matching reversed sides.

    Each directed side must occur once and its reverse once; complexes with
    parallel edges need explicit gluings instead.
    """
    directed = {}
    for t, c in enumerate(faces):
        for s in range(3):
            key = (c[(s + 1) % 3], c[(s + 2) % 3])
            if key in directed:
                raise ValidationError(f"directed side {key} occurs twice; give gluings explicitly")
            directed[key] = (t, s)
    gluings, seen = [], set()
    for t, c in enumerate(faces):
        for s in range(3):
            if (t, s) in seen:
                continue
            a, b = c[(s + 1) % 3], c[(s + 2) % 3]
            if (b, a) not in directed:
                raise ValidationError(f"side {(a, b)} has no partner")
            t2, s2 = directed[(b, a)]
            seen.update({(t, s), (t2, s2)})
            gluings.append(((t, s), (t2, s2)))
    if vertices is None:
        vertices = sorted({v for c in faces for v in c})
    return TriangulatedSurface(vertices, [(t, tuple(c)) for t, c in enumerate(faces)], gluings)


def tetrahedron() -> TriangulatedSurface:
    return from_oriented_faces([(0, 1, 2), (0, 2, 3), (0, 3, 1), (1, 3, 2)])


def octahedron() -> TriangulatedSurface:
    # poles 0, 5; equator 1..4
    faces = []
    for i in range(4):
        a, b = 1 + i, 1 + (i + 1) % 4
        faces.append((0, a, b))
        faces.append((5, b, a))
    return from_oriented_faces(faces)


def icosahedron() -> TriangulatedSurface:
    # top 0, bottom 11, upper ring 1..5, lower ring 6..10
    faces = []
    for i in range(5):
        u, u2 = 1 + i, 1 + (i + 1) % 5
        d, d2 = 6 + i, 6 + (i + 1) % 5
        faces += [(0, u, u2), (u, d, u2), (u2, d, d2), (11, d2, d)]
    return from_oriented_faces(faces)


def punctured_torus() -> TriangulatedSurface:
    """Two triangles, three edges, one vertex."""
    return TriangulatedSurface(
        ["v"], [("t0", ("v", "v", "v")), ("t1", ("v", "v", "v"))], [(("t0", s), ("t1", s)) for s in range(3)]
    )


def thrice_punctured_sphere() -> TriangulatedSurface:
    """Two triangles glued along all three sides, three vertices."""
    return TriangulatedSurface(
        ["a", "b", "c"],
        [("t0", ("a", "b", "c")), ("t1", ("a", "c", "b"))],
        [(("t0", 0), ("t1", 0)), (("t0", 1), ("t1", 2)), (("t0", 2), ("t1", 1))],
    )


def genus_two() -> TriangulatedSurface:
    """One-vertex triangulation of the closed genus-2 surface.

    An octagon with side word a b a^-1 b^-1 c d c^-1 d^-1, fanned from corner 0.
    """
    word = [("a", 1), ("b", 1), ("a", -1), ("b", -1), ("c", 1), ("d", 1), ("c", -1), ("d", -1)]
    tris = [(f"t{i}", ("v", "v", "v")) for i in range(6)]

    def octagon_side(i):
        # (triangle, side) carrying octagon side P_i -> P_{i+1}
        if i == 0:
            return ("t0", 2)
        if i == 7:
            return ("t5", 1)
        return (f"t{i - 1}", 0)

    gluings = [((f"t{i}", 1), (f"t{i + 1}", 2)) for i in range(5)]
    for letter in "abcd":
        i, j = (k for k, (x, _) in enumerate(word) if x == letter)
        gluings.append((octagon_side(i), octagon_side(j)))
    return TriangulatedSurface(["v"], tris, gluings)


def cube_cells() -> CellularSurface:
    """The cube as a cellular sphere: 8 vertices, 12 edges, 6 square faces."""
    faces = {
        "bottom": (0, 3, 2, 1),
        "top": (4, 5, 6, 7),
        "front": (0, 1, 5, 4),
        "right": (1, 2, 6, 5),
        "back": (2, 3, 7, 6),
        "left": (3, 0, 4, 7),
    }
    return cellular_from_faces(list(range(8)), faces)


def digon_pair() -> CellularSurface:
    """Two digons glued into a sphere: 2 vertices, 2 parallel edges."""
    return CellularSurface(
        ["p", "q"],
        [("A", ("p", "q")), ("B", ("q", "p"))],
        [("e0", ("p", "q"), ("A", "B")), ("e1", ("q", "p"), ("A", "B"))],
    )


def cellular_from_faces(vertices, faces: Dict) -> CellularSurface:
    """Build edges from faces whose boundaries share undirected vertex pairs."""
    pairs = {}
    order = []
    for fid, b in faces.items():
        n = len(b)
        for i in range(n):
            key = frozenset((b[i], b[(i + 1) % n]))
            if key not in pairs:
                pairs[key] = [(b[i], b[(i + 1) % n]), []]
                order.append(key)
            pairs[key][1].append(fid)
    edges = []
    for k, key in enumerate(order):
        ends, fs = pairs[key]
        if len(fs) != 2:
            raise ValidationError(f"vertex pair {tuple(ends)} bounds {len(fs)} faces")
        edges.append((k, ends, tuple(fs)))
    return CellularSurface(vertices, list(faces.items()), edges)


BUILDERS = {
    "tetrahedron": tetrahedron,
    "octahedron": octahedron,
    "icosahedron": icosahedron,
    "punctured_torus": punctured_torus,
    "thrice_punctured_sphere": thrice_punctured_sphere,
    "genus_two": genus_two,
    "cube": cube_cells,
    "digon_pair": digon_pair,
}


def builtin(name: str):
    """Load a shipped mesh by name from the package data."""
    if name not in BUILDERS:
        raise ValidationError(f"unknown builtin mesh {name!r}; choose from {sorted(BUILDERS)}")
    text = resources.files("genhyp").joinpath("data", f"{name}.json").read_text(encoding="utf-8")
    return load_surface(io.StringIO(text))


def resolve_mesh(spec: str):
    """A path to a mesh file, or the name of a builtin mesh."""
    if os.path.exists(spec):
        return load_surface(spec)
    if spec in BUILDERS:
        return builtin(spec)
    raise ParseError(f"{spec!r} is neither a file nor a builtin mesh")


# edge cycles ------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeCycle:
    """A closed walk through triangles.

    Step ``(e, t, s_in, s_out)`` enters triangle ``t`` across edge ``e`` on
    side ``s_in`` and leaves across side ``s_out``; the next step's edge is
    the edge on ``s_out``.  The corner between the two sides is
    ``3 - s_in - s_out``.
    """

    steps: Tuple[Tuple[int, int, int, int], ...]

    @property
    def edges(self):
        return [s[0] for s in self.steps]

    @property
    def triangles(self):
        return [s[1] for s in self.steps]

    @property
    def corners(self):
        return [(t, 3 - a - b) for _, t, a, b in self.steps]

    def alternating(self, surface=None):
        """``(e_1, t_1, ..., e_k, t_k)``, with triangle ids if a surface is given."""
        out = []
        for e, t, _, _ in self.steps:
            out += [e, surface.triangles[t][0] if surface is not None else t]
        return tuple(out)

    def __len__(self):
        return len(self.steps)


def _reverse(steps, surface):
    k = len(steps)
    out = []
    for i in range(k - 1, -1, -1):
        _, t, a, b = steps[i]
        out.append((surface.edge_of[t][b], t, b, a))
    return tuple(out)


def canonical_cycle(steps, surface) -> Tuple:
    """Lexicographically least rotation over both walking directions."""
    best = None
    for seq in (tuple(steps), _reverse(steps, surface)):
        for r in range(len(seq)):
            cand = seq[r:] + seq[:r]
            if best is None or cand < best:
                best = cand
    return best


def _is_primitive(steps):
    k = len(steps)
    for p in range(1, k):
        if k % p == 0 and steps[p:] + steps[:p] == steps:
            return False
    return True


def is_edge_cycle(steps, surface) -> bool:
    """Check the incidence conditions of a closed walk."""
    k = len(steps)
    if k == 0:
        return False
    for i, (e, t, a, b) in enumerate(steps):
        if a == b or surface.edge_of[t][a] != e:
            return False
        e2, t2, a2, _ = steps[(i + 1) % k]
        if surface.edge_of[t][b] != e2 or surface.other_side(t, b) != (t2, a2):
            return False
    return True


def enumerate_edge_cycles(surface: TriangulatedSurface, max_multiplicity: int = 2, cap: int = 10**6):
    """All primitive edge cycles using each edge at most ``max_multiplicity`` times."""
    found = {}
    budget = [cap]
    for t0 in range(surface.n_faces):
        for s0 in range(3):
            start = (t0, s0)
            e0 = surface.edge_of[t0][s0]
            count = [0] * surface.n_edges
            count[e0] = 1
            path = []

            def extend(t, s_in, e):
                for s_out in range(3):
                    if s_out == s_in:
                        continue
                    budget[0] -= 1
                    if budget[0] < 0:
                        raise SizeError(f"edge cycle enumeration exceeded {cap} partial paths")
                    path.append((e, t, s_in, s_out))
                    nxt = surface.other_side(t, s_out)
                    e2 = surface.edge_of[t][s_out]
                    if nxt == start and _is_primitive(tuple(path)):
                        key = canonical_cycle(path, surface)
                        found.setdefault(key, EdgeCycle(key))
                    if count[e2] < max_multiplicity:
                        count[e2] += 1
                        extend(nxt[0], nxt[1], e2)
                        count[e2] -= 1
                    path.pop()

            extend(t0, s0, e0)
    return [found[k] for k in sorted(found)]
