"""Reference trigram encoder and nearest-seen-instruction mapping.

Writes the embedding of "pick the lion figure" and the mapping of every
unseen packing instruction onto the seen set."""
import math
import pathlib
import sys

from rng_oracle import hash_string

ROOT = pathlib.Path(__file__).resolve().parents[2]
OUT = ROOT / "tests" / "fixtures"


def embed(text, dim=256):
    padded = (" " + text + " ").encode()
    v = [0.0] * dim
    for i in range(len(padded) - 2):
        v[hash_string(padded[i:i + 3]) % dim] += 1.0
    n = math.sqrt(sum(x * x for x in v))
    return [x / n for x in v]


def objects(split):
    out = []
    for line in (ROOT / "data" / "objects.txt").read_text().splitlines():
        if "|" not in line or line.startswith("#"):
            continue
        f = [x.strip() for x in line.split("|")]
        if f[1] == split:
            out.append(f[0])
    return out


def instr(o):
    return f"pick the {o} in a brown box"


def nearest(query, seen):
    q = embed(query)
    best = None
    for s in seen:
        score = sum(a * b for a, b in zip(q, embed(s)))
        if best is None or score > best[0] or (score == best[0] and s < best[1]):
            best = (score, s)
    return best[1]


if __name__ == "__main__":
    vec = embed("pick the lion figure")
    (OUT / "trigram_pick_the_lion_figure.txt").write_text(" ".join(repr(x) for x in vec) + "\n")
    seen = [instr(o) for o in objects("seen")]
    lines = [f"{instr(u)}\t{nearest(instr(u), seen)}" for u in objects("unseen")]
    (OUT / "semantic_mapping.tsv").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
