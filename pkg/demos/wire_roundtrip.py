"""Drive the simulation over its UDP wire protocol: start a lock-step server
on ephemeral ports, subscribe, and steer a striker from state packets alone
until the scoreboard ticks.

The served match runs with end_on_goal=False, so a goal re-kicks-off but the
score carries forward and is visible on the wire. (With end_on_goal=True the
server resets the episode before the next broadcast; remote agents then have
to infer episode ends from the frame counter rolling back to zero.)

Run: python3 demos/wire_roundtrip.py
"""

import socket
import threading
import time

from vsskit.env import EpisodeConfig, SoccerEnv
from vsskit.netproto import (RobotCommand, ServerConfig, SimServer,
                             decode_state, encode_command, world_from_state)
from vsskit.physics import Team
from vsskit.policies import Chase


def main():
    config = EpisodeConfig(n_per_team=1, n_opponents=0, seed=3,
                           end_on_goal=False)
    srv = SimServer(SoccerEnv(config),
                    ServerConfig(state_port=0, command_port=0, lockstep=True,
                                 max_steps=2000))
    srv.start()
    sp, cp = srv.state_port, srv.command_port
    print(f"lock-step server up: state port {sp}, command port {cp}")
    thread = threading.Thread(target=srv.run)
    thread.start()

    policy = Chase()
    cli = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
    cli.settimeout(2.0)
    t0 = time.perf_counter()
    try:
        cli.sendto(b"hello", ("127.0.0.1", sp))  # any datagram subscribes
        data, _ = cli.recvfrom(65535)
        print(f"subscribed; first state packet is {len(data)} bytes "
              f"({len(srv.env.world.robots())} robot on the pitch)")
        steps = 0
        datagram = b""
        while True:
            snap = world_from_state(decode_state(data))
            if snap.score_own + snap.score_adv >= 3 or steps >= 2000:
                break
            cmd = policy.command(snap, srv.env.params, Team.BLUE, 0)
            datagram = encode_command(
                0, [RobotCommand(0, 0, cmd.left, cmd.right)])
            cli.sendto(datagram, ("127.0.0.1", cp))
            data, _ = cli.recvfrom(65535)
            steps += 1
        wall = time.perf_counter() - t0
        print(f"walked off at {snap.score_own}-{snap.score_adv} after "
              f"{steps} lock-steps = {snap.elapsed:.2f} simulated seconds "
              f"({wall:.2f} s wall)")
        print(f"each step: {len(datagram)}-byte command out, "
              f"{len(data)}-byte state back")
    finally:
        cli.close()
        srv.close()
        thread.join(3.0)

    print("server counters:",
          {k: v for k, v in sorted(srv.stats.items()) if v})


if __name__ == "__main__":
    main()
