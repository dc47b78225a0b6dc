"""
Driving the pipeline over HTTP
==============================

The service wraps the whole pipeline in a session: upload a graph, poll
until the build finishes, then explore by POSTing refine / coarsen / undo
moves.  Every response is canonical JSON (sorted keys, fixed separators),
so identical sessions serialize identically.

This script starts the app on a local port in a background thread and
talks to it with nothing but the standard library.
"""

import json
import threading
import time
import urllib.request

import uvicorn

from modview import edge_list_text, two_level_cliques
from modview.service import create_app

HOST, PORT = "127.0.0.1", 8123
BASE = f"http://{HOST}:{PORT}/v1"

config = uvicorn.Config(create_app(), host=HOST, port=PORT, log_level="warning")
server = uvicorn.Server(config)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)


def request(method, url, body=None, content_type=None):
    req = urllib.request.Request(url, data=body, method=method)
    if content_type:
        req.add_header("Content-Type", content_type)
    try:
        with urllib.request.urlopen(req) as resp:
            return resp.status, json.loads(resp.read() or b"{}")
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


# Multipart upload, built by hand to stay dependency-free.
edges = edge_list_text(two_level_cliques(6, 2, 5)).encode()
params = json.dumps({"seed": 1, "trials": 50}).encode()
boundary = b"demo-boundary-2718281828"
body = b"".join(
    b"--" + boundary + b"\r\n"
    b'Content-Disposition: form-data; name="' + name + b'"; filename="' + name + b'"\r\n'
    b"Content-Type: text/plain\r\n\r\n" + payload + b"\r\n"
    for name, payload in ((b"edges", edges), (b"params", params))
) + b"--" + boundary + b"--\r\n"

status, doc = request(
    "POST", f"{BASE}/sessions", body,
    content_type=f"multipart/form-data; boundary={boundary.decode()}",
)
sid = doc["id"]
print(f"created session {sid} ({status}): {doc['status']}")

while True:
    _, summary = request("GET", f"{BASE}/sessions/{sid}/status")
    if summary["state"] != "building":
        break
    time.sleep(0.05)
print(f"ready: {summary['clusters']} clusters, q={summary['q']:.4f}, "
      f"threshold={summary['threshold']:.4f}")

_, view = request("GET", f"{BASE}/sessions/{sid}/view")
refinable = [n["id"] for n in view["nodes"] if n["refinable"]]
print(f"view has {len(view['nodes'])} disks; refinable: {refinable}")

move = json.dumps({"cluster": refinable[0]}).encode()
status, refined = request(
    "POST", f"{BASE}/sessions/{sid}/refine", move, content_type="application/json"
)
print(f"refine {refinable[0]} -> {len(refined['nodes'])} disks ({status})")

status, undone = request("POST", f"{BASE}/sessions/{sid}/undo", b"")
print(f"undo -> {len(undone['nodes'])} disks ({status})")

# Conflicting moves come back as structured errors, not crashes.
bad = json.dumps({"cluster": 10_000}).encode()
status, err = request(
    "POST", f"{BASE}/sessions/{sid}/refine", bad, content_type="application/json"
)
print(f"refining an unknown cluster: {status} {err['error']['reason']!r}")

server.should_exit = True
thread.join(timeout=5)
