#!/usr/bin/env python3
"""Label the transport fixture for the four evaluation queries.

Relevance is decided from what each query asks for, using the corpus
topology, and never by running the query engine:

  Q1  the Istria hotel.
  Q2  a trip from the CDG stop to the Port-Royal stop.
  Q3  the same trip, with a hotel near Port-Royal.
  Q4  a trip from the CDG stop to the Istria hotel.

BASIC documents are single statements. A statement is relevant when it
carries part of the answer:
  * for a hotel: any statement with that hotel as subject or object;
  * for a trip: the trip_to statements from the origin to the destination,
    to a shelter around the destination or to a required hotel; the
    station_name of every stop on the route; and, when a hotel is required,
    the hotel statements that name it or tie it to the destination stop.

RULES documents are journey patterns. One is relevant when:
  * for a hotel: it holds a block for that hotel;
  * for a trip: it is a TRIP_JOURNEY_PATTERN whose stops visit the origin
    before the destination and which holds a block for each required hotel.

Usage:
  make_qrels.py CORPUS.nt BASIC_DOCS.jsonl RULES_DOCS.jsonl OUT_DIR
"""

import json
import re
import sys
from collections import deque
from pathlib import Path

TRIPLE = re.compile(r'^<([^>]*)>\s+<([^>]*)>\s+(?:<([^>]*)>|"((?:[^"\\]|\\.)*)")\s*\.\s*$')

QUERIES = {
    "Q1": {"hotel": "HOTEL_ISTRIA"},
    "Q2": {"origin": "POINT_ARRET_CDG", "destination": "POINT_ARRET_PORT_ROYAL", "hotels": []},
    "Q3": {"origin": "POINT_ARRET_CDG", "destination": "POINT_ARRET_PORT_ROYAL", "hotels": "near"},
    "Q4": {"origin": "POINT_ARRET_CDG", "destination_of": "HOTEL_ISTRIA"},
}


def local(iri):
    for sep in ("#", "/"):
        if sep in iri:
            iri = iri.rsplit(sep, 1)[1]
    return iri


def load_corpus(path):
    edges = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = TRIPLE.match(line)
        if not m:
            raise SystemExit(f"cannot parse: {line}")
        s, p, o_iri, o_lit = m.groups()
        edges.append((local(s), local(p), local(o_iri) if o_iri is not None else None))
    return edges


def route(edges, origin, destination):
    succ = {}
    for s, p, o in edges:
        if p == "next_stop":
            succ.setdefault(s, []).append(o)
    parent = {origin: None}
    queue = deque([origin])
    while queue:
        cur = queue.popleft()
        for nxt in sorted(succ.get(cur, [])):
            if nxt not in parent:
                parent[nxt] = cur
                queue.append(nxt)
    if destination not in parent:
        raise SystemExit(f"no route from {origin} to {destination}")
    path = [destination]
    while path[-1] != origin:
        path.append(parent[path[-1]])
    return path[::-1]


def near(edges, stop):
    return sorted(s for s, p, o in edges if p == "encircles" and o == stop)


def resolve(edges, spec):
    """Expand a query spec into (origin, destination, hotels)."""
    if "destination_of" in spec:
        hotel = spec["destination_of"]
        stops = [o for s, p, o in edges if s == hotel and p == "encircles"]
        return spec["origin"], stops[0], [hotel]
    hotels = near(edges, spec["destination"]) if spec["hotels"] == "near" else spec["hotels"]
    return spec["origin"], spec["destination"], hotels


def load_docs(path):
    docs = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        docs.append(json.loads(line)["fields"])
    return docs


def fingerprint(fields):
    h = 0xCBF29CE484222325
    for name, text in fields:
        for byte in f"{name}\t{text}\n".encode("utf-8"):
            h ^= byte
            h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return f"{h:016x}"


def statement(fields):
    values = {}
    for name, text in fields:
        values.setdefault(name, text)
    return values["Entity"], values["Attribute"], values["Value"]


def basic_relevant(edges, spec, fields):
    e, at, v = statement(fields)
    if "hotel" in spec:
        return spec["hotel"] in (e, v)
    origin, destination, hotels = resolve(edges, spec)
    stops = route(edges, origin, destination)
    if at == "trip_to" and e == origin and v in [destination] + near(edges, destination) + hotels:
        return True
    if at == "station_name" and e in stops:
        return True
    if e in hotels and at == "nom_element_geographique":
        return True
    return (e, v) in [(h, destination) for h in hotels] + [(destination, h) for h in hotels]


def blocks(fields):
    """Entity labels of the blocks of a composite document, in order."""
    return [text for name, text in fields if name == "Entity"]


def rules_relevant(edges, spec, fields):
    entities = blocks(fields)
    if "hotel" in spec:
        return spec["hotel"] in entities
    if not fields[0][1].endswith("#TRIP_JOURNEY_PATTERN"):
        return False
    origin, destination, hotels = resolve(edges, spec)
    if origin not in entities or destination not in entities:
        return False
    if entities.index(origin) > entities.index(destination):
        return False
    return all(h in entities for h in hotels)


def main(argv):
    if len(argv) != 5:
        raise SystemExit(__doc__)
    edges = load_corpus(argv[1])
    # Inferred edges are not needed: the labels depend on topology only.
    out_dir = Path(argv[4])
    for kind, docs_path, judge in (("basic", argv[2], basic_relevant), ("rules", argv[3], rules_relevant)):
        docs = load_docs(docs_path)
        lines = []
        for qid, spec in QUERIES.items():
            for fields in docs:
                if judge(edges, spec, fields):
                    lines.append(f"{qid}\t{fingerprint(fields)}\t1")
        (out_dir / f"qrels.{kind}.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"qrels.{kind}.tsv: {len(lines)} judgments")


if __name__ == "__main__":
    main(sys.argv)
