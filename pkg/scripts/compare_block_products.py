#!/usr/bin/env python3
"""Compare the tensor fold with the product complex for every block pair.

For each ordered pair of catalog blocks this prints, degree by degree, the
graded tensor of the cohomology tables next to the cohomology of the
product complex, flagging where the two disagree.  Free ranks always
agree; integral differences are 2-primary torsion.
"""

import itertools
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from bredon import (
    bredon_cochain_complex,
    builtin_block,
    builtin_block_names,
    cohomology_table,
    kunneth_tensor,
    product_complex,
)


def main() -> int:
    blocks = {name: builtin_block(name) for name in builtin_block_names()}
    complexes = {name: bredon_cochain_complex(b) for name, b in blocks.items()}
    tables = {name: cohomology_table(c) for name, c in complexes.items()}

    for a, b in itertools.combinations_with_replacement(sorted(blocks), 2):
        fold = kunneth_tensor(tables[a], tables[b])
        prod = cohomology_table(product_complex(complexes[a], complexes[b]))
        print(f"{a} * {b}:")
        degrees = sorted(set(fold.entries) | set(prod.entries))
        for d in degrees:
            t, c = fold.group(d), prod.group(d)
            if t.is_trivial and c.is_trivial:
                continue
            mark = "" if t == c else "   <- differ"
            print(f"  degree {d}: tensor {t} | complex {c}{mark}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
