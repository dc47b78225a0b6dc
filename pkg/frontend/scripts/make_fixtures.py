"""Regenerate the vitest fixtures by driving a live service instance.

Every fixture file holds the raw response bytes of one /v1 call, so the
client tests exercise exactly what the browser would receive.  Run from
the repository root after changing the engine:

    python3 frontend/scripts/make_fixtures.py
"""

import json
import pathlib
import threading
import time
import urllib.error
import urllib.request

import uvicorn

from modview import attributed_blocks, edge_list_text, planted_cliques, two_level_cliques
from modview.service import create_app

HOST, PORT = "127.0.0.1", 8462
BASE = f"http://{HOST}:{PORT}/v1"
OUT = pathlib.Path(__file__).resolve().parent.parent / "test" / "fixtures"

BOUNDARY = "fixture-boundary-1618033988"


def request(method, url, body=None, content_type=None):
    """Return (status, raw bytes) without decoding."""
    req = urllib.request.Request(url, data=body, method=method)
    if content_type:
        req.add_header("Content-Type", content_type)
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, resp.read()
    except urllib.error.HTTPError as err:
        return err.code, err.read()


def post_json(url, payload):
    return request(
        "POST", url, json.dumps(payload).encode(), content_type="application/json"
    )


def multipart(parts):
    chunks = []
    for name, payload, ctype in parts:
        chunks.append(
            f'--{BOUNDARY}\r\nContent-Disposition: form-data; name="{name}"; '
            f'filename="{name}"\r\nContent-Type: {ctype}\r\n\r\n'.encode() + payload + b"\r\n"
        )
    return b"".join(chunks) + f"--{BOUNDARY}--\r\n".encode()


def create_session(edges_text, attributes_text=None, params=None):
    parts = [("edges", edges_text.encode(), "text/plain")]
    if attributes_text is not None:
        parts.append(("attributes", attributes_text.encode(), "text/plain"))
    parts.append(("params", json.dumps(params or {}).encode(), "application/json"))
    status, body = request(
        "POST",
        f"{BASE}/sessions",
        multipart(parts),
        content_type=f"multipart/form-data; boundary={BOUNDARY}",
    )
    assert status == 201, body
    sid = json.loads(body)["id"]
    deadline = time.monotonic() + 120
    while time.monotonic() < deadline:
        _, sbody = request("GET", f"{BASE}/sessions/{sid}/status")
        state = json.loads(sbody)["state"]
        if state == "ready":
            return sid
        assert state == "building", sbody
        time.sleep(0.1)
    raise RuntimeError("build timed out")


def save(name, payload: bytes):
    OUT.joinpath(name).write_bytes(payload)
    print(f"wrote {name} ({len(payload)} bytes)")


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    server = uvicorn.Server(
        uvicorn.Config(create_app(), host=HOST, port=PORT, log_level="warning")
    )
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    while not server.started:
        time.sleep(0.05)

    meta = {}
    params = {"seed": 1, "trials": 50}

    # --- planted fixture: the refine/undo pixel-identity exemplar -------
    sid = create_session(edge_list_text(planted_cliques(4, 5)), params=params)
    _, status_body = request("GET", f"{BASE}/sessions/{sid}/status")
    save("status_ready.json", status_body)
    _, base = request("GET", f"{BASE}/sessions/{sid}/view")
    save("planted_base.json", base)

    _, hier = request("GET", f"{BASE}/sessions/{sid}/hierarchy")
    chain = json.loads(hier)["coarse_chain"]
    assert chain, "planted hierarchy has no coarse chain"
    merged = chain[0]["merged"]
    base_nodes = json.loads(base)["nodes"]
    terminal = next(n["id"] for n in base_nodes if not n["refinable"])
    meta["planted"] = {"session": sid, "coarsen_target": merged, "terminal": terminal}

    code, err = post_json(f"{BASE}/sessions/{sid}/refine", {"cluster": terminal})
    assert code == 409, err
    assert json.loads(err)["error"]["reason"] == "no significant substructure"
    save("planted_error_terminal.json", err)

    code, _ = post_json(f"{BASE}/sessions/{sid}/coarsen", {"target": merged})
    assert code == 200
    _, coarsened = request("GET", f"{BASE}/sessions/{sid}/view")
    save("planted_coarsened.json", coarsened)

    code, _ = post_json(f"{BASE}/sessions/{sid}/refine", {"cluster": merged})
    assert code == 200
    _, refined = request("GET", f"{BASE}/sessions/{sid}/view")
    save("planted_refined.json", refined)

    code, _ = post_json(f"{BASE}/sessions/{sid}/undo", {})
    assert code == 200
    _, undone = request("GET", f"{BASE}/sessions/{sid}/view")
    assert undone == coarsened, "undo must restore the exact pre-refine document"
    save("planted_undone.json", undone)

    for step in chain[1:]:
        code, err = post_json(f"{BASE}/sessions/{sid}/coarsen", {"target": step["merged"]})
        assert code == 200, err
    _, top = request("GET", f"{BASE}/sessions/{sid}/view")
    root = json.loads(top)["nodes"][0]["id"]
    code, err = post_json(f"{BASE}/sessions/{sid}/coarsen", {"target": root})
    assert code == 409, err
    assert json.loads(err)["error"]["reason"] == "at significance boundary"
    save("planted_error_boundary.json", err)
    meta["planted"]["boundary_root"] = root

    # --- grouped fixture: a refinable initial frontier ------------------
    sid = create_session(edge_list_text(two_level_cliques(12, 2, 5)), params=params)
    _, base = request("GET", f"{BASE}/sessions/{sid}/view")
    save("grouped_base.json", base)
    target = next(n["id"] for n in json.loads(base)["nodes"] if n["refinable"])
    code, _ = post_json(f"{BASE}/sessions/{sid}/refine", {"cluster": target})
    assert code == 200
    _, refined = request("GET", f"{BASE}/sessions/{sid}/view")
    save("grouped_refined.json", refined)
    meta["grouped"] = {"session": sid, "refine_target": target}

    # --- attributed fixture: stat coloring in both modes ----------------
    g, table = attributed_blocks(
        block_sizes=(20, 20), category_rates=(0.9, 0.1), seed=7
    )
    sid = create_session(edge_list_text(g), attributes_text=table, params=params)
    _, doc = request("GET", f"{BASE}/sessions/{sid}/view?stat=kind&mode=p")
    save("attributed_p.json", doc)
    _, doc = request("GET", f"{BASE}/sessions/{sid}/view?stat=kind&mode=residual&category=X")
    save("attributed_residual.json", doc)
    code, err = request("GET", f"{BASE}/sessions/{sid}/view?stat=nope&mode=p")
    assert code == 400, err
    save("attributed_error_stat.json", err)
    meta["attributed"] = {"session": sid, "attribute": "kind", "category": "X"}

    code, err = request("GET", f"{BASE}/sessions/missing/view")
    assert code == 404, err
    save("error_unknown_session.json", err)

    save("meta.json", (json.dumps(meta, indent=2, sort_keys=True) + "\n").encode())
    server.should_exit = True
    thread.join(timeout=5)


if __name__ == "__main__":
    main()
