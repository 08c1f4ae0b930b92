#!/usr/bin/env python3
"""Convert a GML network file (e.g. the public power grid network) to an edge list.

Only ``edge [ source X target Y ]`` records are read; node labels are the
numeric ids used there.

    python scripts/gml_to_edges.py power.gml > data/powergrid.txt
"""

import re
import sys

EDGE = re.compile(r"edge\s*\[\s*[^\]]*?source\s+(\S+)\s+[^\]]*?target\s+(\S+)", re.S)


def main(argv):
    if len(argv) != 2:
        sys.exit(__doc__)
    with open(argv[1]) as fh:
        text = fh.read()
    n = 0
    for src, dst in EDGE.findall(text):
        sys.stdout.write(f"{src} {dst}\n")
        n += 1
    print(f"{n} edges", file=sys.stderr)


if __name__ == "__main__":
    main(sys.argv)
