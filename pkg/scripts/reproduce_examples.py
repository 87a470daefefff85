#!/usr/bin/env python3
"""Recompute the headline numbers for every bundled example tiling.

For each fixture this walks the full pipeline — validation, matchings,
toric diagram, chamber decomposition, and per-chamber fan and tilting
data — and prints one deterministic report.  With ``--svg-dir`` it also
renders one annotated diagram per chamber.

Run from the repository root:

    python3 scripts/reproduce_examples.py
    python3 scripts/reproduce_examples.py --svg-dir out/ --fixture spp
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import branetile as bt

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"
DEFAULT_FIXTURES = ("honeycomb", "conifold", "spp", "z2z2",
                    "honeycomb_dimer", "spp_dimer", "square_dimer")


def report(name: str, svg_dir: "Path | None") -> None:
    tiling = bt.load_document(
        (FIXTURE_DIR / f"{name}.json").read_text(encoding="utf-8"))
    result = bt.validate(tiling)
    print(f"== {name}: {len(tiling.vertices)} vertices, "
          f"{len(tiling.arrows)} arrows, {len(tiling.faces)} faces, "
          f"valid={result.ok}")
    if not result.ok:
        return

    tower = bt.build_lattice_tower(tiling)
    print(f"   lattice ranks: degree {tower.degree_rank}, "
          f"weight {tower.rank}, kernel 3")

    matchings = bt.enumerate_perfect_matchings(tiling, tower)
    diagram = bt.toric_diagram(tiling, tower, matchings)
    print(f"   {len(matchings)} matchings, "
          f"{len(diagram.extremal_ids)} extremal, canonical diagram "
          + " ".join(f"({x},{y})" for x, y in diagram.canonical))

    chambers = bt.chamber_decomposition(tiling, matchings)
    classes = bt.git_equivalence_classes(tiling, chambers, matchings)
    print(f"   {len(chambers)} chambers in {len(classes)} fan classes")

    for chamber in chambers:
        theta = chamber.representative
        fan = bt.moduli_fan(tiling, theta, matchings)
        smooth = bt.check_smooth(fan)
        coll = bt.tilting_collection(tiling, tower, theta, matchings)
        shown = ", ".join(
            f"{v}:{free}" for v, (free, _) in coll.classes)
        print(f"   chamber {chamber.index} theta={theta}: "
              f"{len(fan.rays)} rays, smooth={smooth}, "
              f"picard rank {coll.presentation.rank}, classes {shown}")
        if svg_dir is not None:
            tri = bt.triangulation(fan, diagram) if smooth else None
            svg = bt.render_diagram_svg(
                diagram, tri, title=f"{name} chamber {chamber.index}")
            target = svg_dir / f"{name}_chamber{chamber.index}.svg"
            target.write_text(svg, encoding="utf-8")
            print(f"     wrote {target}")


def main(argv: "list[str] | None" = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--fixture", action="append",
                        help="fixture name (repeatable; default: all)")
    parser.add_argument("--svg-dir", type=Path, default=None,
                        help="also render one diagram per chamber here")
    args = parser.parse_args(argv)

    names = tuple(args.fixture) if args.fixture else DEFAULT_FIXTURES
    if args.svg_dir is not None:
        args.svg_dir.mkdir(parents=True, exist_ok=True)
    for name in names:
        report(name, args.svg_dir)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
