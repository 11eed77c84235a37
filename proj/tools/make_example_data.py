#!/usr/bin/env python3
"""Regenerate the example inputs under data/.

  data/forestfires_standin.csv   517 rows in the UCI forest-fires schema
  data/bwm/dimensions/dmNN.json  dimension-level BWM documents, 20 decision-makers
  data/bwm/attributes/<DIM>/dmNN.json  attribute-level documents per dimension

The fire rows are synthetic. Marginals follow the published summary statistics
of the UCI file (month/day frequencies, FWI ranges, ~48% zero burned area with a
heavy right tail). Drop the real forestfires.csv into data/ to use it instead.

The BWM documents assign best/worst picks so that the per-criterion vote counts
match the survey's reported tallies; the comparison values themselves are
illustrative (near-consistent judgements with small perturbations).
"""

import json
import pathlib

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

MONTHS = ["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"]
MONTH_COUNTS = [2, 20, 54, 9, 2, 17, 32, 184, 172, 15, 1, 9]
DAYS = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"]
DAY_COUNTS = [74, 64, 54, 61, 85, 84, 95]

# Seasonal dryness index per month, 0 = wet winter, 1 = late summer.
DRYNESS = [0.05, 0.1, 0.2, 0.3, 0.35, 0.5, 0.7, 0.9, 1.0, 0.6, 0.15, 0.05]


def fire_rows(rng):
    months = np.repeat(np.arange(12), MONTH_COUNTS)
    days = np.repeat(np.arange(7), DAY_COUNTS)
    rng.shuffle(months)
    rng.shuffle(days)
    rows = []
    for m, d in zip(months, days):
        dry = DRYNESS[m]
        x = int(rng.integers(1, 10))
        y = int(rng.integers(2, 10))
        ffmc = float(np.clip(96.2 - rng.gamma(1.2, 3.0) - 8.0 * (1 - dry) * rng.random(), 18.7, 96.2))
        dmc = float(np.clip(rng.normal(20 + 150 * dry, 35), 1.1, 291.3))
        dc = float(np.clip(rng.normal(60 + 650 * dry, 80), 7.9, 860.6))
        isi = float(np.clip(rng.gamma(3.0, 3.0) * (0.4 + 0.8 * (ffmc - 80) / 16), 0.0, 56.1))
        temp = float(np.clip(rng.normal(8 + 14 * dry, 4.5), 2.2, 33.3))
        rh = int(np.clip(round(rng.normal(62 - 25 * dry + (20 - temp), 14)), 15, 100))
        wind = float(np.clip(rng.gamma(4.0, 1.0), 0.4, 9.4))
        rain = 0.0 if rng.random() > 0.016 else float(np.round(rng.exponential(1.2), 1))
        # Burned area: zero for about half the fires, log-normal tail otherwise,
        # loosely increasing with temperature and dryness.
        p_burn = 0.29 + 0.25 * dry + 0.01 * (temp - 19)
        if rng.random() < p_burn:
            scale = 0.6 + 0.05 * (temp - 19) + 0.08 * (wind - 4)
            area = float(np.exp(rng.normal(1.0 + scale, 1.75)))
            area = min(area, 1090.84)
        else:
            area = 0.0
        rows.append((x, y, MONTHS[m], DAYS[d], round(ffmc, 1), round(dmc, 1), round(dc, 1),
                     round(isi, 1), round(temp, 1), rh, round(wind, 1), rain, round(area, 2)))
    return rows


def write_fires(rng):
    out = DATA / "forestfires_standin.csv"
    with out.open("w") as f:
        f.write("X,Y,month,day,FFMC,DMC,DC,ISI,temp,RH,wind,rain,area\n")
        for r in fire_rows(rng):
            f.write(",".join(_fmt(v) for v in r) + "\n")


def _fmt(v):
    return repr(v) if isinstance(v, float) else str(v)


def assign_best_worst(best_counts, worst_counts, rng):
    """Pair best and worst picks over the panel so no one picks the same criterion twice."""
    n_dm = sum(best_counts)
    assert n_dm == sum(worst_counts)
    for _ in range(10000):
        best = np.repeat(np.arange(len(best_counts)), best_counts)
        worst = np.repeat(np.arange(len(worst_counts)), worst_counts)
        rng.shuffle(best)
        rng.shuffle(worst)
        if np.all(best != worst):
            return [int(b) for b in best], [int(w) for w in worst]
    raise RuntimeError("no valid best/worst pairing")


def comparisons(n, best, worst, rng):
    """Near-consistent 9-point comparisons for one decision-maker."""
    m_bw = int(rng.integers(max(3, n), 10))
    to_worst = [1] * n
    to_best = [1] * n
    for j in range(n):
        if j == best:
            to_best[j], to_worst[j] = 1, m_bw
        elif j == worst:
            to_best[j], to_worst[j] = m_bw, 1
        else:
            a = int(rng.integers(2, m_bw)) if m_bw > 2 else 1
            b = max(1, min(m_bw, round(m_bw / a) + int(rng.integers(-1, 2))))
            to_best[j], to_worst[j] = a, b
    return to_best, to_worst


def write_bwm(path_dir, codes, names, best_counts, worst_counts, rng):
    path_dir.mkdir(parents=True, exist_ok=True)
    best, worst = assign_best_worst(best_counts, worst_counts, rng)
    for k, (b, w) in enumerate(zip(best, worst), start=1):
        mb, mw = comparisons(len(codes), b, w, rng)
        doc = {
            "decision_maker": f"DM{k:02d}",
            "criteria": codes,
            "names": names,
            "best": codes[b],
            "worst": codes[w],
            "best_to_others": mb,
            "others_to_worst": mw,
        }
        (path_dir / f"dm{k:02d}.json").write_text(json.dumps(doc, indent=2) + "\n")


def write_all_bwm(rng):
    base = DATA / "bwm"
    write_bwm(base / "dimensions", ["PE", "EE", "SI", "EC"],
              ["Performance expectancy", "Effort expectancy", "Social influence", "Enabling conditions"],
              [8, 2, 7, 3], [1, 9, 0, 10], rng)
    attrs = {
        "PE": (["Predictive nature", "Events analytics", "Better forecast"], [10, 7, 3], [1, 6, 13]),
        "EE": (["Ease of automation", "Ease of learning", "Ease of adoption"], [4, 7, 9], [10, 5, 5]),
        "SI": (["Political pressure", "Technological giants' push", "Social pressure"], [3, 11, 6], [14, 1, 5]),
        "EC": (["Availability of computing power", "Interoperability", "Big data availability",
                "Mass market potential"], [6, 2, 12, 0], [1, 1, 0, 18]),
    }
    for dim, (names, bc, wc) in attrs.items():
        codes = [f"{dim}{i + 1}" for i in range(len(names))]
        write_bwm(base / "attributes" / dim, codes, names, bc, wc, rng)


def main():
    rng = np.random.default_rng(20220517)
    write_fires(rng)
    write_all_bwm(rng)


if __name__ == "__main__":
    main()
