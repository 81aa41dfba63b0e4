#!/usr/bin/env python3
"""Extract plotted coordinates from the source manuscript into reference CSVs.

Usage: extract_reference.py SOURCE_MD OUT_DIR
"""
import math
import re
import sys
from pathlib import Path

COORD = re.compile(r"\(\s*(-?[\d.]+)\s*,\s*(-?[\d.]+)\s*\)")


def series(text):
    blocks = re.findall(r"coordinates\s*\{(.*?)\}", text, flags=re.S)
    return [[(float(x), float(y)) for x, y in COORD.findall(b)] for b in blocks]


def fmt(v):
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    return f"{v:.9g}"


def write_curve(path, analytic=None, sim=None):
    xs = [x for x, _ in (analytic or sim)]
    a = dict(analytic or [])
    s = dict(sim or [])
    with open(path, "w") as f:
        f.write("x,analytic,sim,sim_ci\n")
        for x in xs:
            f.write(",".join(fmt(v) for v in (x, a.get(x, math.nan), s.get(x, math.nan), math.nan)) + "\n")


def main():
    src, out = Path(sys.argv[1]).read_text(), Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)
    s = series(src)
    # Order of appearance: 6 (coverage DL), 8 (coverage UL), 5 + 5 (inverse SINR), 4 (rate CDF).
    assert len(s) == 28, len(s)
    dl, ul, inv_dl, inv_ul, rate = s[0:6], s[6:14], s[14:19], s[19:24], s[24:28]

    write_curve(out / "fig2_hd.csv", dl[0], dl[3])
    write_curve(out / "fig2_fd_eps0.2.csv", dl[1], dl[4])
    write_curve(out / "fig2_fd_eps0.8.csv", dl[2], dl[5])

    # analytic order (0.8,40) (0.2,40) (0.8,23) (0.2,23); sim order (0.2,23) (0.8,23) (0.2,40) (0.8,40)
    write_curve(out / "fig3_eps0.8_pd40.csv", ul[0], ul[7])
    write_curve(out / "fig3_eps0.2_pd40.csv", ul[1], ul[6])
    write_curve(out / "fig3_eps0.8_pd23.csv", ul[2], ul[5])
    write_curve(out / "fig3_eps0.2_pd23.csv", ul[3], ul[4])

    for panel, data in (("dl", inv_dl), ("ul", inv_ul)):
        for (r, eps), curve in zip(((400, 0.2), (400, 0.8), (200, 0.2), (200, 0.8)), data[:4]):
            write_curve(out / f"fig4_{panel}_r{r}_eps{eps}.csv", curve)
        write_curve(out / f"fig4_{panel}_mean_sinr.csv", sim=data[4])

    names = ("ul_eps0.8_pd23", "dl_eps0.8_pd40", "dl_eps0.8_pd23", "hd")
    for name, curve in zip(names, rate):
        write_curve(out / f"fig5_{name}.csv", [(x, y + 0.0) for x, y in curve])

    rows = re.findall(r"\$\((0\.\d),(\d+)\)\$(.*?)\\\\|(HD)(.*?)\\\\", src[src.index("begin{tabular}"):])
    num = re.compile(r"\$?([\d.]+)(?:\\times10\^\{(-?\d+)\})?\$?")

    def val(cell):
        cell = cell.strip()
        if cell == "-":
            return math.nan
        m = num.fullmatch(cell)
        return float(m.group(1)) * (10 ** int(m.group(2)) if m.group(2) else 1)

    with open(out / "table1.csv", "w") as f:
        f.write("config,ul_edge_rate,ul_mean_rate,dl_edge_rate,dl_mean_rate\n")
        for eps, pd, rest, hd, hd_rest in rows:
            label = "hd" if hd else f"fd_eps{eps}_pd{pd}"
            cells = (hd_rest if hd else rest).split("&")[1:]
            f.write(",".join([label] + [fmt(val(c)) for c in cells]) + "\n")


if __name__ == "__main__":
    main()
