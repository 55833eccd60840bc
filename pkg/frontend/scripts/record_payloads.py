"""Regenerate the console's test fixtures from the live service.

Drives the HTTP app in-process through the bundled 25-step run plus the
polygon proposal round and records every request/response pair verbatim.
Outputs:
  frontend/tests/payloads.json  ordered exchange log (the mock fetch queue)
  frontend/src/fixtures.ts      the situations and clicked vertices

Run from the repository root:  python3 frontend/scripts/record_payloads.py
"""
from __future__ import annotations

import json
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from planfit.service import create_app
from planfit.simulation import load_fixture_decisions, load_fixture_dms

HERE = Path(__file__).resolve().parent.parent


def as_num(v: float):
    return int(v) if float(v).is_integer() else float(v)


def main() -> None:
    client = TestClient(create_app(tempfile.mkdtemp()))
    exchanges: list[dict] = []

    def call(method: str, path: str, body=None) -> dict:
        resp = client.request(method, path, json=body)
        data = resp.json()
        if resp.status_code >= 400:
            raise SystemExit(f"{method} {path} failed: {resp.status_code} {data}")
        entry = {"method": method, "path": path, "status": resp.status_code, "body": data}
        if body is not None:
            entry["request"] = body
        exchanges.append(entry)
        return data

    rows, control = load_fixture_dms()
    decisions, _ = load_fixture_decisions()

    session = call("POST", "/sessions", {"m": 2, "n": 3, "mode": "assist"})
    sid = session["id"]

    fixture_rows = []
    for dms, dec in zip(rows, decisions):
        supply = [as_num(v) for v in dms.supply]
        demand = [as_num(v) for v in dms.demand]
        point = [as_num(v) for v in dec["free_vars"]]
        fixture_rows.append({"supply": supply, "demand": demand, "point": point})
        call("POST", f"/sessions/{sid}/situation",
             {"supply": supply, "demand": demand})
        call("POST", f"/sessions/{sid}/decision", {"point": point})
        call("GET", f"/sessions/{sid}/estimate")

    polygon = {
        "supply": [as_num(v) for v in control.supply],
        "demand": [as_num(v) for v in control.demand],
    }
    call("POST", f"/sessions/{sid}/situation", polygon)
    call("GET", f"/sessions/{sid}/proposal")
    call("POST", f"/sessions/{sid}/proposal/approve")
    call("GET", f"/sessions/{sid}/estimate")

    out = HERE / "tests" / "payloads.json"
    out.write_text(json.dumps(exchanges, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(exchanges)} exchanges)")

    lines = [
        "// Generated by scripts/record_payloads.py from the bundled run; do not edit.",
        "",
        "export interface FixtureDecision {",
        "  supply: number[];",
        "  demand: number[];",
        "  point: number[];",
        "}",
        "",
        "export const FIXTURE_DECISIONS: FixtureDecision[] = [",
    ]
    for row in fixture_rows:
        lines.append(
            f"  {{ supply: {json.dumps(row['supply'])}, "
            f"demand: {json.dumps(row['demand'])}, "
            f"point: {json.dumps(row['point'])} }},"
        )
    lines += [
        "];",
        "",
        "export const POLYGON_SITUATION = {",
        f"  supply: {json.dumps(polygon['supply'])},",
        f"  demand: {json.dumps(polygon['demand'])},",
        "};",
        "",
    ]
    fixtures = HERE / "src" / "fixtures.ts"
    fixtures.write_text("\n".join(lines), encoding="utf-8")
    print(f"wrote {fixtures} ({len(fixture_rows)} decisions)")


if __name__ == "__main__":
    main()
