"""JSON-lines trajectory dumps: one record per state, with the action taken from it."""

from langworld.utils import read_jsonl, write_jsonl
from langworld.world.dynamics import observe
from langworld.world.schemas import TrajectoryRecordSchema
from langworld.world.tasks import get_task


def trajectory_records(task, seed, states, actions):
    """The final state has no action."""
    if len(actions) not in (len(states) - 1, len(states)):
        raise ValueError("%d states but %d actions" % (len(states), len(actions)))
    schema = TrajectoryRecordSchema()
    name = get_task(task).name
    return [
        schema.dump({
            "task": name,
            "seed": seed,
            "t": t,
            "state": state,
            "observation": observe(state).tolist(),
            "action": actions[t] if t < len(actions) else None,
        })
        for t, state in enumerate(states)
    ]


def write_trajectory(path, task, seed, states, actions):
    return write_jsonl(path, trajectory_records(task, seed, states, actions))


def read_trajectory(path):
    schema = TrajectoryRecordSchema()
    return [schema.load(record) for record in read_jsonl(path)]
