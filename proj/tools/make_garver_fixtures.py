#!/usr/bin/env python3
"""Regenerates the Garver-style 6-bus fixtures under data/.

Loads, generators and reactances follow the classic 6-bus Garver system.
The main fixtures use a Braess-free layout: buses 1-4 form a meshed core
rated above any possible injection, and buses 5 and 6 hang off the core on
radial corridors whose circuits (existing and candidate) are identical.
Under that layout a built circuit can only add capacity, so dispatch cost is
monotone in investment. garver6_mesh keeps the original meshed corridors,
where building a line can raise dispatch cost through the extra KVL loop.
Uncertain dimension A is bus 5 net demand; dimension B is split evenly
between buses 2 and 4.
"""
import json
import pathlib
import sys

CORE = 2000  # exceeds total generation plus peak demand
RADIAL_EXISTING = [(1, 2, 0.40, CORE), (1, 4, 0.60, CORE), (2, 3, 0.20, CORE),
                   (2, 4, 0.40, CORE), (3, 5, 0.20, 100)]
# from, to, reactance, rating MW, cost $
# Later circuits in a corridor cost more (harder rights of way).
RADIAL_CANDIDATES = [(2, 6, 0.30, 100, 6000, "a"), (2, 6, 0.30, 100, 9000, "b"),
                     (2, 6, 0.30, 100, 20000, "c"), (3, 5, 0.20, 100, 4000, "a"),
                     (3, 5, 0.20, 100, 9000, "b"), (3, 5, 0.20, 100, 15000, "c")]

MESH_EXISTING = [(1, 2, 0.40, 200), (1, 4, 0.60, 160), (1, 5, 0.20, 200),
                 (2, 3, 0.20, 200), (2, 4, 0.40, 200), (3, 5, 0.20, 200)]
MESH_CANDIDATES = [(2, 6, 0.30, 100, 6000, ""), (3, 6, 0.48, 100, 9600, ""),
                   (4, 6, 0.30, 100, 6000, ""), (5, 6, 0.61, 78, 12200, ""),
                   (3, 5, 0.20, 100, 4000, ""), (2, 3, 0.20, 100, 4000, "")]


def network(existing=RADIAL_EXISTING, candidates=RADIAL_CANDIDATES):
    return {
        "buses": [1, 2, 3, 4, 5, 6],
        "existing_lines": [
            {"from": a, "to": b, "susceptance": round(1 / x, 6), "capacity": c, "name": f"L{a}-{b}"}
            for a, b, x, c in existing],
        "candidate_lines": [
            {"from": a, "to": b, "susceptance": round(1 / x, 6), "capacity": c, "cost": k,
             "name": f"C{a}-{b}{tag}"}
            for a, b, x, c, k, tag in candidates],
        "generators": [{"bus": 1, "name": "G1"}, {"bus": 3, "name": "G3"}, {"bus": 6, "name": "G6"}],
    }


def scenario(sid, weight, periods, dims, shift, gen_cost, ramps=False):
    lo, hi, ml, mu, alloc, nominal = [], [], [], [], [], []
    for t in range(periods):
        s = shift + 10 * t
        if dims == 1:
            lo += [200 + s]; hi += [280 + s]; ml += [230 + s]; mu += [250 + s]
            alloc.append([[0], [0], [0], [0], [1], [0]])
            nominal.append([80, 240, 40, 160, 0, 0])
        else:
            lo += [200 + s, 120 + s]; hi += [280 + s, 200 + s]
            ml += [230 + s, 150 + s]; mu += [250 + s, 170 + s]
            alloc.append([[0, 0], [0, 0.5], [0, 0], [0, 0.5], [1, 0], [0, 0]])
            nominal.append([80, 160, 40, 80, 0, 0])
    sc = {"id": sid, "weight": weight,
          "support": {"lower": lo, "upper": hi},
          "moments": {"mu_lower": ml, "mu_upper": mu},
          "allocation": alloc, "gen_cost": gen_cost, "gen_capacity": [300, 360, 600],
          "shed_cost": [1000] * 6, "surplus_cost": [1000] * 6, "nominal_demand": nominal}
    if ramps:
        sc["ramp_down"] = [200, 200, 250]
        sc["ramp_up"] = [200, 200, 250]
    return sc


def case(name, periods, dims, scenarios, net=None):
    return {"name": name, "network": net or network(),
            "periods": {"count": periods, "hours": 4, "dims_per_period": dims},
            "scenarios": scenarios, "investment_policy": {}}


def main(out_dir):
    base_cost, high_cost = [30, 25, 12], [32, 24, 15]
    cases = {
        "garver6_d2": case("garver6_d2", 2, 1, [scenario("base", 1.0, 2, 1, 0, base_cost)]),
        "garver6_d4": case("garver6_d4", 2, 2, [scenario("base", 1.0, 2, 2, 0, base_cost)]),
        "garver6_d6": case("garver6_d6", 3, 2,
                           [scenario("base", 1.0, 3, 2, 0, base_cost, ramps=True)]),
        "garver6_d2_two": case("garver6_d2_two", 2, 1,
                               [scenario("low", 0.6, 2, 1, -20, base_cost),
                                scenario("high", 0.4, 2, 1, 20, high_cost)]),
        "garver6_d4_two": case("garver6_d4_two", 2, 2,
                               [scenario("low", 0.6, 2, 2, -20, base_cost),
                                scenario("high", 0.4, 2, 2, 20, high_cost)]),
        # 2^12 vertices: beyond the default full-enumeration cap.
        "garver6_d12": case("garver6_d12", 6, 2, [scenario("base", 1.0, 6, 2, 0, base_cost)]),
        "garver6_mesh": case("garver6_mesh", 2, 1, [scenario("base", 1.0, 2, 1, 0, base_cost)],
                             network(MESH_EXISTING, MESH_CANDIDATES)),
    }
    out = pathlib.Path(out_dir)
    for name, doc in cases.items():
        (out / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data")
