"""Regenerate the shipped irrep catalog data file.

The catalog is built from hardcoded generator images with exact
root-of-unity arithmetic; this script serializes it to
src/grouplin/data/irreps.json. Run from the repository root:

    python3 tools/gen_irreps.py
"""

import os
import sys

from grouplin.repcheck import build_reference_catalog, catalog_to_json


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    target = os.path.join(here, "..", "src", "grouplin", "data", "irreps.json")
    target = os.path.normpath(target)
    os.makedirs(os.path.dirname(target), exist_ok=True)
    text = catalog_to_json(build_reference_catalog())
    with open(target, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"wrote {target} ({len(text)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
