#!/usr/bin/env python3
"""Download the public SNAP datasets used by the benchmark regressions.

Fetches wiki-Vote (7,115 vertices / 103,689 edges) and p2p-Gnutella31
(62,586 / 147,892) into data/ as plain edge lists.  Both are unweighted
directed graphs; self-loops and duplicate edges, if any, are merged away
by the normalizer at load time.
"""
import gzip
import shutil
import sys
import urllib.request
from pathlib import Path

DATASETS = {
    "wiki-Vote.txt": "https://snap.stanford.edu/data/wiki-Vote.txt.gz",
    "p2p-Gnutella31.txt": "https://snap.stanford.edu/data/p2p-Gnutella31.txt.gz",
}


def main() -> int:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, url in DATASETS.items():
        target = out_dir / name
        if target.exists():
            print(f"{target} already present, skipping")
            continue
        gz = target.with_suffix(target.suffix + ".gz")
        print(f"fetching {url}")
        urllib.request.urlretrieve(url, gz)
        with gzip.open(gz, "rb") as src, open(target, "wb") as dst:
            shutil.copyfileobj(src, dst)
        gz.unlink()
        print(f"wrote {target}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
