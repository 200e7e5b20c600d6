"""Random engine play shared by the property and acceptance tests."""

import random

from rogueplay.sim import Status, step
from rogueplay.sim import actions as A
from rogueplay.sim.tiles import DIRECTIONS


def random_action(rng: random.Random, state) -> A.Action:
    if state.open_menu is not None:
        return A.PressKey(rng.choice(["ESC", "ENTER", "SPACE", "a", "b", "y", "n", "l", "s"]))
    letter = rng.choice("abcdef")
    return rng.choice(
        [
            A.Move(rng.choice(list(DIRECTIONS))),
            A.Move(rng.choice(list(DIRECTIONS))),
            A.Search(),
            A.Pickup(),
            A.Drop(letter),
            A.Eat(letter),
            A.Quaff(None),
            A.Zap(letter),
            A.Kick(rng.choice(list(DIRECTIONS))),
            A.Open(rng.choice(list(DIRECTIONS))),
            A.GoDown(),
            A.Wait(),
            A.Pray(),
        ]
    )


def play(state, seed: int, n: int):
    rng = random.Random(seed)
    for _ in range(n):
        if state.done is not Status.RUNNING:
            break
        step(state, random_action(rng, state))
    return state
