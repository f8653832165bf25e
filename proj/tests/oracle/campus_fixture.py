#!/usr/bin/env python3
"""Authoring aid and independent oracle for the campus fixture.

Writes fixtures/campus.osm, fixtures/campus.json and fixtures/traces/T1.jsonl
from a local (east, north) metre layout, then recomputes the stage ground
truth with geographiclib (Karney geodesics) and networkx. Nothing here calls
into the C++ code, so the printed numbers are an independent check of the
values frozen into fixtures/README.md and the unit/acceptance tests.

    python3 tests/oracle/campus_fixture.py [--write]
"""
import argparse
import itertools
import json
import math
import pathlib

import networkx as nx
from geographiclib.geodesic import Geodesic

WGS = Geodesic.WGS84
CENTER = (39.1040, 26.5560)
ROOT = pathlib.Path(__file__).resolve().parents[2]

# Local layout in metres east/north of CENTER.
LOCAL = {
    101: (-82, 88), 102: (2, 92), 103: (84, 89),
    104: (-79, 8), 105: (3, 10), 106: (81, 12),
    107: (-84, -71), 108: (-2, -68), 109: (79, -66),
    110: (162, 91), 111: (231, 10), 112: (-43, -74),
    113: (-81, 50), 114: (1, -30), 115: (118, -18),
    116: (131, -49), 117: (38, 41), 118: (52, 63),
    119: (-190, -125), 120: (190, -120), 121: (-140, -20),
    122: (-141, -62), 123: (121, 152), 124: (150, 192),
    125: (-41, -31), 126: (-40, 90), 127: (43, 91),
    128: (42, 11), 129: (83, 51), 130: (80, -27),
    131: (0, -124), 132: (-146, -41), 133: (127, -33),
    134: (38, -67), 135: (-61, -12), 136: (21, 24),
    137: (100, 89),
    201: (-40, 13), 202: (60, -63), 203: (10, 235),
}

WAYS = [
    (1001, [101, 126, 102, 127, 103, 137, 110], {"highway": "residential", "name": "Harbour Street"}),
    (1002, [104, 105, 128, 106, 111], {"highway": "residential", "name": "Market Street"}),
    (1003, [107, 112, 108, 134, 109], {"highway": "tertiary", "name": "South Road"}),
    (1004, [101, 113, 104, 107], {"highway": "footway"}),
    (1005, [102, 105, 114, 108], {"highway": "footway", "name": "College Walk"}),
    (1006, [103, 129, 106, 130, 109], {"highway": "living_street"}),
    (1007, [106, 115, 133, 116, 109], {"highway": "path"}),
    (1008, [105, 136, 117, 118], {"highway": "service"}),
    (1009, [119, 131, 120], {"highway": "motorway", "oneway": "yes"}),
    (1010, [121, 132, 122], {"highway": "footway"}),
    (1011, [103, 123, 124], {"highway": "residential"}),
    (1012, [104, 135, 125, 108], {"highway": "pedestrian"}),
]

TAGGED = {
    201: {"amenity": "pharmacy", "name": "Central Pharmacy"},
    202: {"amenity": "bar", "name": "Blue Lantern"},
    203: {"amenity": "hospital", "name": "General Hospital"},
}

WALKABLE = {"residential", "footway", "path", "pedestrian", "living_street",
            "service", "tertiary", "secondary", "primary", "unclassified"}


def to_geo(x, y):
    if x == 0 and y == 0:
        return CENTER
    az = math.degrees(math.atan2(x, y))
    r = WGS.Direct(CENTER[0], CENTER[1], az, math.hypot(x, y))
    return (r["lat2"], r["lon2"])


def fmt(v):
    return f"{v:.7f}"


def positions():
    return {nid: tuple(float(fmt(c)) for c in to_geo(*xy)) for nid, xy in LOCAL.items()}


def dist(p, q):
    return WGS.Inverse(p[0], p[1], q[0], q[1])["s12"]


def write_fixtures(pos):
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             '<osm version="0.6" generator="hand-authored">']
    for nid in sorted(LOCAL):
        lat, lon = pos[nid]
        if nid in TAGGED:
            lines.append(f'  <node id="{nid}" lat="{fmt(lat)}" lon="{fmt(lon)}">')
            for k, v in TAGGED[nid].items():
                lines.append(f'    <tag k="{k}" v="{v}"/>')
            lines.append('  </node>')
        else:
            lines.append(f'  <node id="{nid}" lat="{fmt(lat)}" lon="{fmt(lon)}"/>')
    for wid, refs, tags in WAYS:
        lines.append(f'  <way id="{wid}">')
        for r in refs:
            lines.append(f'    <nd ref="{r}"/>')
        for k, v in tags.items():
            lines.append(f'    <tag k="{k}" v="{v}"/>')
        lines.append('  </way>')
    lines.append('</osm>')
    (ROOT / "fixtures/campus.osm").write_text("\n".join(lines) + "\n")

    elements = []
    for nid in sorted(LOCAL):
        el = {"type": "node", "id": nid, "lat": float(fmt(pos[nid][0])), "lon": float(fmt(pos[nid][1]))}
        if nid in TAGGED:
            el["tags"] = TAGGED[nid]
        elements.append(el)
    for wid, refs, tags in WAYS:
        elements.append({"type": "way", "id": wid, "nodes": refs, "tags": tags})
    doc = {"version": 0.6, "generator": "hand-authored", "elements": elements}
    (ROOT / "fixtures/campus.json").write_text(json.dumps(doc, indent=1) + "\n")


def along(a, b, d):
    """Local point d metres from node a toward node b."""
    ax, ay = LOCAL[a]
    bx, by = LOCAL[b]
    n = math.hypot(bx - ax, by - ay)
    return (ax + (bx - ax) * d / n, ay + (by - ay) * d / n)


def t1_fixes():
    # 1 Hz walk at 1.4 m/s: south leg 105->114 approaching 105, cross onto
    # 105->102 at t=7, reverse at t=12.
    fixes = []
    for i, d in enumerate([8.6, 7.2, 5.8, 4.4, 3.0, 1.6], start=1):
        fixes.append((float(i), along(105, 114, d)))
    for i, d in zip(range(7, 15), [1.2, 2.6, 4.0, 5.4, 6.8, 5.4, 4.0, 2.6]):
        fixes.append((float(i), along(105, 102, d)))
    return fixes


def write_trace(fixes):
    out = []
    for t, xy in fixes:
        lat, lon = to_geo(*xy)
        out.append(f'{{"t":{t:.1f},"lat":{fmt(lat)},"lon":{fmt(lon)}}}')
    (ROOT / "fixtures/traces/T1.jsonl").write_text("\n".join(out) + "\n")


def build_graph(pos):
    retained = [(wid, refs) for wid, refs, tags in WAYS if tags.get("highway") in WALKABLE]
    uses = {}
    for _, refs in retained:
        for r in refs:
            uses[r] = uses.get(r, 0) + 1
    g = nx.MultiGraph()
    for wid, refs in retained:
        start = 0
        for i in range(1, len(refs)):
            if i == len(refs) - 1 or uses[refs[i]] >= 2:
                poly = refs[start:i + 1]
                length = sum(dist(pos[p], pos[q]) for p, q in zip(poly, poly[1:]))
                g.add_edge(poly[0], poly[-1], weight=length, poly=poly, way=wid)
                start = i
    return g


def cookie_count(length, spacing=15.0, margin=3.0):
    if length < 2 * margin + spacing:
        return 1
    return math.floor((length - 2 * margin) / spacing) + 1


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--write", action="store_true")
    args = ap.parse_args()
    pos = positions()
    if args.write:
        write_fixtures(pos)
        write_trace(t1_fixes())

    print(f"extract: nodes={len(LOCAL)} ways={len(WAYS)} tagged={len(TAGGED)}")
    g = build_graph(pos)
    print(f"road graph: nodes={g.number_of_nodes()} edges={g.number_of_edges()}")

    center = CENTER
    inside = {n for n in g.nodes if dist(center, pos[n]) <= 200.0}
    for n in sorted(g.nodes):
        print(f"  node {n} r={dist(center, pos[n]):8.3f} {'in' if n in inside else 'OUT'}")
    clipped = nx.MultiGraph()
    for u, v, data in g.edges(data=True):
        if all(dist(center, pos[p]) <= 200.0 for p in data["poly"]):
            clipped.add_edge(u, v, **data)
    comps = sorted(nx.connected_components(clipped), key=lambda c: (-len(c), min(c)))
    stage = clipped.subgraph(comps[0]).copy()
    print(f"clipped: nodes={clipped.number_of_nodes()} edges={clipped.number_of_edges()} components={len(comps)}")
    print(f"stage:   nodes={stage.number_of_nodes()} edges={stage.number_of_edges()}")

    total = 0
    for u, v, data in sorted(stage.edges(data=True), key=lambda e: (e[2]["way"], e[2]["poly"])):
        n = cookie_count(data["weight"])
        frac = (data["weight"] - 6.0) / 15.0
        total += n
        print(f"  edge way={data['way']} {data['poly']} L={data['weight']:.4f} cookies={n} (L-6)/15={frac:.4f}")
    print(f"cookies total={total}")
    pois = [p for p in TAGGED if dist(center, pos[p]) <= 200.0]
    print(f"pois in circle={pois}")

    # Spawn order: Dijkstra distance from heading node 105, farthest first.
    d = nx.single_source_dijkstra_path_length(stage, 105, weight="weight")
    order = sorted(d, key=lambda n: (-d[n], n))
    print("spawn order from 105:", [(n, round(d[n], 3)) for n in order])

    def ranked_paths(src, dst, k=3):
        simple = nx.DiGraph()
        for u, v, data in stage.edges(data=True):
            for a, b in ((u, v), (v, u)):
                if not simple.has_edge(a, b) or simple[a][b]["weight"] > data["weight"]:
                    simple.add_edge(a, b, weight=data["weight"])
        paths = []
        for p in nx.all_simple_paths(simple, src, dst):
            paths.append((sum(simple[a][b]["weight"] for a, b in zip(p, p[1:])), p))
        return sorted(paths)[:k]

    print("G1 107->102:", ranked_paths(107, 102))
    print("G2 102->105:", ranked_paths(102, 105))
    print("G2 105->108:", ranked_paths(105, 108))


if __name__ == "__main__":
    main()
