"""End-to-end checks of the command-line tool: exit codes, output files, schema."""

import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BINARY = sys.argv.pop(1)
SCHEMA = sys.argv.pop(1)


def metis(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v + 1)
        adj[v].append(u + 1)
    lines = [f"{n} {len(edges)}"] + [" ".join(map(str, sorted(a))) for a in adj]
    return "\n".join(lines) + "\n"


def mis_size(n, edges):
    best = 0
    for mask in range(1 << n):
        if all(not (mask >> u & 1 and mask >> v & 1) for u, v in edges):
            best = max(best, bin(mask).count("1"))
    return best


class CliTest(unittest.TestCase):
    def setUp(self):
        self.dir = tempfile.mkdtemp(prefix="fastker_cli_")
        with open(SCHEMA) as f:
            self.schema = json.load(f)

    def write(self, name, text):
        path = os.path.join(self.dir, name)
        with open(path, "w") as f:
            f.write(text)
        return path

    def run_cli(self, *args):
        return subprocess.run([BINARY, *args], capture_output=True, text=True)

    def stats(self, prefix):
        with open(prefix + ".stats.json") as f:
            data = json.load(f)
        jsonschema.validate(data, self.schema)
        return data

    def test_c5_exact(self):
        graph = self.write("c5.graph", metis(5, [(i, (i + 1) % 5) for i in range(5)]))
        prefix = os.path.join(self.dir, "c5")
        res = self.run_cli("--input", graph, "--output", prefix, "--solve-exact")
        self.assertEqual(res.returncode, 0, res.stderr)
        data = self.stats(prefix)
        self.assertEqual(data["offset"], 2)
        self.assertEqual(data["kernel"]["vertices"], 0)
        with open(prefix + ".mis") as f:
            ids = [int(x) for x in f.read().split()]
        self.assertEqual(len(ids), 2)
        self.assertEqual(ids, sorted(ids))

    def test_wrong_partition_file(self):
        graph = self.write("p.graph", metis(4, [(0, 1), (1, 2), (2, 3)]))
        part = self.write("wrong.part", "0\n1\n")
        res = self.run_cli("--input", graph, "--partition-file", part,
                           "--output", os.path.join(self.dir, "p"))
        self.assertEqual(res.returncode, 2)

    def test_malformed_graph(self):
        graph = self.write("bad.graph", "2 1\n2\n\n")
        res = self.run_cli("--input", graph, "--output", os.path.join(self.dir, "bad"))
        self.assertEqual(res.returncode, 2)
        self.assertIn("line", res.stderr)

    def test_unknown_flag(self):
        res = self.run_cli("--input", "x.graph", "--frobnicate")
        self.assertEqual(res.returncode, 64)
        self.assertIn("Usage", res.stderr)

    def test_missing_input(self):
        self.assertEqual(self.run_cli().returncode, 64)

    def test_full_vs_default_same_value(self):
        import random
        rng = random.Random(5)
        for trial in range(10):
            n = 14
            edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.3]
            graph = self.write(f"r{trial}.graph", metis(n, edges))
            want = mis_size(n, edges)
            sizes = []
            for extra in ([], ["--mode", "full", "--no-tracking"], ["--threads", "3"]):
                prefix = os.path.join(self.dir, f"r{trial}_{len(extra)}")
                res = self.run_cli("--input", graph, "--output", prefix, "--seed", "7",
                                   "--solve-exact", "--quiet", *extra)
                self.assertEqual(res.returncode, 0, res.stderr)
                self.stats(prefix)
                with open(prefix + ".mis") as f:
                    ids = [int(x) for x in f.read().split()]
                members = set(ids)
                for u, v in edges:
                    self.assertFalse(u in members and v in members)
                sizes.append(len(ids))
            self.assertEqual(sizes, [want] * 3)

    def test_deterministic_single_worker(self):
        import random
        rng = random.Random(11)
        n = 300
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.01]
        graph = self.write("det.graph", metis(n, edges))
        outputs = []
        for run in range(2):
            prefix = os.path.join(self.dir, f"det{run}")
            res = self.run_cli("--input", graph, "--output", prefix, "--threads", "1",
                               "--blocks", "1", "--seed", "3", "--no-tracking", "--quiet")
            self.assertEqual(res.returncode, 0, res.stderr)
            with open(prefix + ".graph") as g, open(prefix + ".map") as m:
                outputs.append((g.read(), m.read(), self.stats(prefix)["offset"]))
        self.assertEqual(outputs[0], outputs[1])

    def test_rule_toggles(self):
        graph = self.write("c6.graph", metis(6, [(i, (i + 1) % 6) for i in range(6)]))
        prefix = os.path.join(self.dir, "c6")
        flags = ["--disable-linear-time", "--disable-isolated-clique", "--disable-fold",
                 "--disable-twin", "--disable-unconfined", "--disable-diamond", "--disable-lp"]
        res = self.run_cli("--input", graph, "--output", prefix, *flags)
        self.assertEqual(res.returncode, 0, res.stderr)
        data = self.stats(prefix)
        self.assertEqual(data["kernel"]["vertices"], 6)
        self.assertFalse(any(data["config"]["rules"].values()))


if __name__ == "__main__":
    unittest.main()
