"""Who may message whom: forward and backward acquaintances, connectivity and friends."""

from sysactor import ActorSpec, Environment, can_receive, can_send, check_connectivity, friends, run_law_suite
from sysactor.fixtures import ca_broken_doc, two_actor_env


def show(env):
    for a in env.actors:
        for c in env.actors:
            if a != c:
                print(f"  {a} -> {c}: send={can_send(env, a, c)} receive={can_receive(env, a, c)}")


def main():
    env = two_actor_env()
    print("A sends to B, and B listens to A:")
    show(env)
    print("  connectivity violations:", check_connectivity(env))

    broken = ca_broken_doc().env
    print("\nA lists B, but B does not list A back:")
    for r in run_law_suite(broken, {"CA", "Prop3.3"}):
        print(f"  {r.law}: {r.status}", *(w.message for w in r.witnesses))

    pals = Environment.of([ActorSpec("P", facq=("Q",), bacq=("Q",)), ActorSpec("Q", facq=("P",), bacq=("P",))])
    print("\nMutual acquaintances are friends:", dict((n, sorted(friends(pals, n))) for n in pals.actors))
    print("  Prop3.4:", run_law_suite(pals, "Prop3.4")[0].status)


if __name__ == "__main__":
    main()
