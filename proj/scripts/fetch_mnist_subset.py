#!/usr/bin/env python3
"""Build IDX files from the 10,000-digit MNIST subset bundled in the npm `mnist` package.

The official MNIST archives are the preferred input; drop them (gzipped or raw)
into the output directory instead if they are reachable. This script exists for
environments where only a package registry is available.

Usage:
    scripts/fetch_mnist_subset.py [--out data/mnist] [--train 8000] [--seed 7]
"""

import argparse
import gzip
import json
import random
import struct
import subprocess
import tarfile
import tempfile
from pathlib import Path


def write_idx_images(path: Path, images):
    with gzip.open(path, "wb") as f:
        f.write(struct.pack(">IIII", 0x00000803, len(images), 28, 28))
        for img in images:
            f.write(bytes(img))


def write_idx_labels(path: Path, labels):
    with gzip.open(path, "wb") as f:
        f.write(struct.pack(">II", 0x00000801, len(labels)))
        f.write(bytes(labels))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/mnist")
    ap.add_argument("--train", type=int, default=8000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(["npm", "pack", "mnist@1.1.0"], cwd=tmp, check=True,
                       stdout=subprocess.DEVNULL)
        with tarfile.open(Path(tmp) / "mnist-1.1.0.tgz") as tar:
            tar.extractall(tmp)
        samples = []
        for digit in range(10):
            data = json.loads((Path(tmp) / "package/src/digits" / f"{digit}.json").read_text())["data"]
            for k in range(len(data) // 784):
                px = [min(255, max(0, round(v * 255))) for v in data[k * 784:(k + 1) * 784]]
                samples.append((px, digit))

    random.Random(args.seed).shuffle(samples)
    train, test = samples[:args.train], samples[args.train:]
    write_idx_images(out / "train-images-idx3-ubyte.gz", [s[0] for s in train])
    write_idx_labels(out / "train-labels-idx1-ubyte.gz", [s[1] for s in train])
    write_idx_images(out / "t10k-images-idx3-ubyte.gz", [s[0] for s in test])
    write_idx_labels(out / "t10k-labels-idx1-ubyte.gz", [s[1] for s in test])
    print(f"wrote {len(train)} train / {len(test)} test samples to {out}")


if __name__ == "__main__":
    main()
