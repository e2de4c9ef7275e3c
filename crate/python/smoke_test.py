#!/usr/bin/env python3
"""Smoke test for the cone_zeta_py extension module.

Builds the cdylib if needed, imports it from a temp directory under the
importable name, and exercises the main types end to end. Exits nonzero
on the first failing check.
"""

import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_library() -> Path:
    candidates = [
        ROOT / "target" / profile / "libcone_zeta_py.so"
        for profile in ("release", "debug")
    ]
    for path in candidates:
        if path.exists():
            return path
    subprocess.run(
        ["cargo", "build", "-p", "cone-zeta-py"], cwd=ROOT, check=True
    )
    for path in candidates:
        if path.exists():
            return path
    raise FileNotFoundError("libcone_zeta_py.so not found after cargo build")


def check(label: str, ok: bool, detail: str = "") -> None:
    if not ok:
        print(f"FAIL: {label}" + (f" ({detail})" if detail else ""))
        sys.exit(1)
    print(f"PASS: {label}")


def main() -> None:
    lib = locate_library()
    tmp = tempfile.mkdtemp(prefix="cone-zeta-py-")
    shutil.copy(lib, Path(tmp) / "cone_zeta_py.so")
    sys.path.insert(0, tmp)
    import cone_zeta_py as cz

    names = cz.examples()
    check(
        "example registry",
        {"abelian_1", "abelian_2", "abelian_3", "heisenberg", "sl2"} <= set(names),
        str(names),
    )

    # exact Laurent arithmetic round-trips through text
    a = cz.LaurentPoly("L + 1")
    b = cz.LaurentPoly("L - 1")
    check("LaurentPoly arithmetic", a * b == cz.LaurentPoly("L^2 - 1"))
    check("LaurentPoly evaluation", a.eval(4) == Fraction(5))

    # Heisenberg: twelve pieces, four edges, and the known counting series
    pipe = cz.pipeline("heisenberg")
    pieces = pipe.pieces()
    check("heisenberg piece count", len(pieces) == 12, str(len(pieces)))
    constants = {ab for _, ab in pipe.edges()}
    check(
        "heisenberg edge constants",
        constants == {(1, 2), (1, 3), (2, 3), (2, 4)},
        str(constants),
    )
    counting = pipe.counting()
    series = counting.specialize(2).series(3)
    check(
        "heisenberg counting series at p = 2",
        series == [Fraction(1), Fraction(3), Fraction(19), Fraction(43)],
        str(series),
    )
    symbolic = counting.series(2)
    check(
        "heisenberg symbolic coefficient",
        str(symbolic[1]) == "L + 1",
        str(symbolic[1]),
    )

    # the oracle agrees with the series coefficients
    counts = [cz.count_subalgebras("heisenberg", 2, n) for n in range(4)]
    check("oracle matches series", counts == [1, 3, 19, 43], str(counts))

    # topological zetas, including the stored-resolution fallback for sl2
    check(
        "heisenberg topological zeta",
        str(cz.zeta_top("heisenberg")) == "3 / (2 * (s + 2) * (s + 3) * (2*s + 3))",
        str(cz.zeta_top("heisenberg")),
    )
    check(
        "sl2 topological zeta",
        str(cz.zeta_top("sl2")) == "(3*s + 8) / (2 * (s + 2)^2 * (s + 3) * (2*s + 5))",
        str(cz.zeta_top("sl2")),
    )
    try:
        cz.pipeline("sl2")
        check("sl2 pipeline rejects non-monomial conditions", False)
    except ValueError:
        check("sl2 pipeline rejects non-monomial conditions", True)

    # custom input through JSON
    abelian_2 = '{"dim": 2, "brackets": {}}'
    custom = cz.pipeline_from_json(abelian_2)
    series = custom.counting().specialize(3).series(2)
    check(
        "custom algebra counting series",
        series == [Fraction(1), Fraction(4), Fraction(13)],
        str(series),
    )
    check(
        "pipelines compare as values",
        custom.counting() == cz.pipeline("abelian_2").counting(),
    )

    check("F_q[[t]] submodule count", cz.count_submodules_fqt(3, 2) == 13)

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
