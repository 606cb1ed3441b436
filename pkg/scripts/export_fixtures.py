"""Write the built-in fixtures as YAML input documents into fixtures/."""

import argparse
from pathlib import Path

from torofiber.fixtures import FIXTURES
from torofiber.io import document_from_fiber_space, dump

CHARTS = {
    "NONRED_chart": "mode: chart\nname: NONRED_chart\nn: 1\nm: 1\nblocks: [[2]]\n",
    "X1SQ_X2CUBE_chart": "mode: chart\nname: X1SQ_X2CUBE_chart\nn: 2\nm: 1\nblocks: [[2, 3]]\n",
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="fixtures")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(exist_ok=True)
    for name, build in FIXTURES.items():
        (out / f"{name}.yaml").write_text(dump(document_from_fiber_space(build())))
    for name, text in CHARTS.items():
        (out / f"{name}.yaml").write_text(text)
    print("\n".join(sorted(p.name for p in out.glob("*.yaml"))))


if __name__ == "__main__":
    main()
