#!/usr/bin/env python3
"""Writes every connected graph on 1..N vertices, one per isomorphism class, as graph6.

A connected graph always has a vertex whose removal keeps it connected (a leaf of a
spanning tree), so extending each class on n-1 vertices by one vertex with every
nonempty neighborhood reaches every class on n vertices.
"""
import argparse
import itertools

import networkx as nx

KNOWN_COUNTS = {1: 1, 2: 1, 3: 2, 4: 6, 5: 21, 6: 112, 7: 853, 8: 11117}


def extend(classes, n):
    buckets = {}
    out = []
    for g in classes:
        for r in range(1, n):
            for nbrs in itertools.combinations(range(n - 1), r):
                h = g.copy()
                h.add_node(n - 1)
                h.add_edges_from((n - 1, u) for u in nbrs)
                key = (tuple(sorted(d for _, d in h.degree())), nx.weisfeiler_lehman_graph_hash(h))
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(h, other) for other in bucket):
                    continue
                bucket.append(h)
                out.append(h)
    return out


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-n", type=int, default=8)
    parser.add_argument("output")
    args = parser.parse_args()
    level = [nx.empty_graph(1)]
    with open(args.output, "w") as f:
        for n in range(1, args.max_n + 1):
            if n > 1:
                level = extend(level, n)
            if n in KNOWN_COUNTS and len(level) != KNOWN_COUNTS[n]:
                raise SystemExit(f"n={n}: found {len(level)} classes, expected {KNOWN_COUNTS[n]}")
            for g in level:
                f.write(nx.to_graph6_bytes(g, header=False).decode())
            print(f"n={n}: {len(level)} connected graphs")


if __name__ == "__main__":
    main()
