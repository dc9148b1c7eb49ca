from __future__ import annotations

import json
import socket
import subprocess
import sys
import time
import urllib.request

import pytest

DIVKIT = [sys.executable, "-m", "divkit.cli"]


def free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.fixture(scope="session")
def service_port():
    """A real scoring service, reached only over HTTP."""
    port = free_port()
    proc = subprocess.Popen(
        [*DIVKIT, "serve", "--port", str(port)],
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
    )
    deadline = time.perf_counter() + 15
    try:
        while True:
            try:
                with urllib.request.urlopen(
                    f"http://127.0.0.1:{port}/v1/health", timeout=1
                ) as r:
                    assert json.loads(r.read())["status"] == "ok"
                    break
            except OSError:
                if time.perf_counter() > deadline:
                    raise TimeoutError("service never became healthy")
                time.sleep(0.05)
        yield port
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def run_cli(args: list[str]) -> subprocess.CompletedProcess:
    return subprocess.run([*DIVKIT, *args], capture_output=True, text=True)
