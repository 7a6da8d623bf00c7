"""Connect to a running simulation server and chase the ball until a goal.

Start a server first, for example:

    vsskit serve --lockstep --state-port 9001 --command-port 9002

then run this script against the same ports. It drives one robot with the
scripted chase agent, prints the score whenever it changes, and exits once
the own-team score increases or the simulated-time budget runs out.
"""

import argparse
import sys

from vssclient import RemoteEnvConfig, chase_wheels, connect, remote_step


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--state-port", type=int, default=9001)
    parser.add_argument("--command-port", type=int, default=9002)
    parser.add_argument("--team", type=int, default=0, choices=(0, 1))
    parser.add_argument("--robot", type=int, default=0,
                        help="controlled robot id")
    parser.add_argument("--max-sim-seconds", type=float, default=60.0,
                        help="give up after this much simulated time")
    args = parser.parse_args(argv)

    config = RemoteEnvConfig(host=args.host, state_port=args.state_port,
                             command_port=args.command_port, team=args.team,
                             controlled=(args.robot,))
    handle = connect(config)
    start = handle.state.elapsed
    score = (handle.state.score_own, handle.state.score_adv)
    goals_for = 0
    print(f"connected: frame {handle.state.frame}, score {score[0]}-{score[1]}")
    with handle:
        while True:
            state = handle.state
            if state.elapsed - start > args.max_sim_seconds:
                print(f"no goal within {args.max_sim_seconds:g} simulated "
                      f"seconds, giving up")
                return 1
            wheels = chase_wheels(state, robot_id=args.robot, team=args.team)
            _, done, state = remote_step(handle, [wheels])
            now = (state.score_own, state.score_adv)
            if now != score:
                print(f"score {now[0]}-{now[1]} at {state.elapsed:.2f} s "
                      f"(frame {state.frame})")
                goals_for += max(0, now[0] - score[0])
                score = now
            if goals_for > 0:
                print(f"scored after {state.elapsed - start:.2f} simulated "
                      f"seconds")
                return 0
            if done:
                print("server ended the episode")
                return 0 if goals_for > 0 else 1


if __name__ == "__main__":
    sys.exit(main())
