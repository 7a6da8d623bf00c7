"""Connection handling against fake and real servers.

The live test exercises the full external boundary: it launches the
simulator's own CLI in a subprocess, speaks only UDP to it, and requires
the scripted chase agent to score within 60 simulated seconds."""

import socket
import struct
import subprocess
import sys
import threading
from pathlib import Path

import pytest

pytest.importorskip("vssclient")

from vssclient import (
    RemoteEnvConfig,
    VersionMismatch,
    WireError,
    chase_wheels,
    connect,
    remote_step,
)

FIXTURES = Path(__file__).resolve().parents[2] / "tests" / "fixtures"


def free_udp_ports(n):
    socks = [socket.socket(socket.AF_INET, socket.SOCK_DGRAM) for _ in range(n)]
    for s in socks:
        s.bind(("127.0.0.1", 0))
    ports = [s.getsockname()[1] for s in socks]
    for s in socks:
        s.close()
    return ports


class TestConfigInvariants:
    def test_defaults_are_valid(self):
        cfg = RemoteEnvConfig()
        assert cfg.state_port != cfg.command_port
        assert cfg.timeout > 0

    def test_equal_ports_rejected(self):
        with pytest.raises(ValueError):
            RemoteEnvConfig(state_port=9001, command_port=9001)

    def test_nonpositive_timeout_rejected(self):
        with pytest.raises(ValueError):
            RemoteEnvConfig(timeout=0.0)
        with pytest.raises(ValueError):
            RemoteEnvConfig(timeout=-1.0)

    def test_bad_team_and_controlled_rejected(self):
        with pytest.raises(ValueError):
            RemoteEnvConfig(team=2)
        with pytest.raises(ValueError):
            RemoteEnvConfig(controlled=())
        with pytest.raises(ValueError):
            RemoteEnvConfig(controlled=(0, 0))
        with pytest.raises(ValueError):
            RemoteEnvConfig(controlled=(300,))


class _OneShotReplier:
    """Binds a UDP socket and answers the first datagram with fixed bytes."""

    def __init__(self, reply):
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.sock.bind(("127.0.0.1", 0))
        self.sock.settimeout(5.0)
        self.port = self.sock.getsockname()[1]
        self.reply = reply
        self.thread = threading.Thread(target=self._serve, daemon=True)

    def _serve(self):
        try:
            _, addr = self.sock.recvfrom(2048)
            self.sock.sendto(self.reply, addr)
        except OSError:
            pass

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.sock.close()
        self.thread.join(timeout=5.0)


class TestConnectErrors:
    def test_silent_port_times_out(self):
        # a bound socket that never answers: subscribe datagram lands,
        # no state ever comes back
        sink = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        sink.bind(("127.0.0.1", 0))
        port = sink.getsockname()[1]
        other = port - 1 if port == 65535 else port + 1
        try:
            cfg = RemoteEnvConfig(state_port=port, command_port=other,
                                  timeout=0.2)
            with pytest.raises(TimeoutError):
                connect(cfg)
        finally:
            sink.close()

    def test_version_2_packet_raises_explicit_error(self):
        raw = (FIXTURES / "state_1v1.bin").read_bytes()
        bumped = raw[:4] + b"\x02" + raw[5:]
        with _OneShotReplier(bumped) as server:
            cfg = RemoteEnvConfig(state_port=server.port,
                                  command_port=free_udp_ports(1)[0],
                                  timeout=5.0)
            with pytest.raises(VersionMismatch):
                connect(cfg)

    def test_garbage_reply_raises_wire_error(self):
        with _OneShotReplier(b"not a packet") as server:
            cfg = RemoteEnvConfig(state_port=server.port,
                                  command_port=free_udp_ports(1)[0],
                                  timeout=5.0)
            with pytest.raises(WireError):
                connect(cfg)


class TestLiveServer:
    """End to end over the CLI: empty field, one robot, chase to a goal."""

    SERVE_CONFIG = "\n".join([
        "[env]",
        "n_per_team = 1",
        "n_opponents = 0",
        "end_on_goal = false",
        "seed = 3",
        "",
    ])

    def test_chase_agent_scores_within_60_sim_seconds(self, tmp_path):
        cfg_file = tmp_path / "serve.ini"
        cfg_file.write_text(self.SERVE_CONFIG)
        state_port, command_port = free_udp_ports(2)
        proc = subprocess.Popen(
            [sys.executable, "-m", "vsskit", "serve",
             "--config", str(cfg_file),
             "--state-port", str(state_port),
             "--command-port", str(command_port),
             "--lockstep", "--max-steps", "6000", "--max-wall", "120"],
            stdout=subprocess.PIPE, stderr=subprocess.STDOUT, text=True)
        try:
            banner = proc.stdout.readline()
            assert "serving" in banner, f"server failed to start: {banner!r}"
            handle = connect(RemoteEnvConfig(state_port=state_port,
                                             command_port=command_port,
                                             timeout=10.0))
            with handle:
                start = handle.state.elapsed
                scored_at = None
                for _ in range(3000):
                    wheels = chase_wheels(handle.state)
                    _, done, state = remote_step(handle, [wheels])
                    if state.score_own >= 1:
                        scored_at = state.elapsed - start
                        break
                    if done or state.elapsed - start > 60.0:
                        break
                assert scored_at is not None, "chase agent never scored"
                assert scored_at <= 60.0
        finally:
            proc.terminate()
            try:
                proc.communicate(timeout=10.0)
            except subprocess.TimeoutExpired:
                proc.kill()
                proc.communicate()
