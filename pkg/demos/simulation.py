"""Run the three-actor relay every possible way and check each trace."""

from dataclasses import replace

from sysactor import SimConfig, check_trace, enumerate_all, format_traces, run_sampled
from sysactor.fixtures import three_actor_env


def main():
    env = three_actor_env()
    branches = enumerate_all(env, SimConfig(mode="enumerate_all"))
    print(format_traces(branches), end="")
    print(f"{len(branches)} branches; violations:", [check_trace(b, env) for b in branches])

    once = run_sampled(env, SimConfig(seed=7))
    print("\nseed 7 picks branch with actions", [e.action for e in once.events])

    tampered = replace(once, events=once.events[1:])
    print("dropping the first send:")
    for v in check_trace(tampered, env):
        print(" ", v)


if __name__ == "__main__":
    main()
