"""``manifest.json``: what a run read, what it wrote, and under which config."""

import logging
from pathlib import Path

import langworld
from langworld.cli.models import ManifestEntry, RunManifest
from langworld.cli.schemas import RunConfigSchema, RunManifestSchema
from langworld.utils import config_hash, digest_file, read_json, write_json

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"


def run_config_hash(config):
    return config_hash(RunConfigSchema().dump(config))


def _relative(path, root):
    path = Path(path)
    try:
        return path.resolve().relative_to(root.resolve()).as_posix()
    except ValueError:
        return path.as_posix()


def build_manifest(command, config, seeds, out, outputs, inputs=(), volatile=()):
    out = Path(out)
    volatile = {Path(path).resolve() for path in volatile}
    entries = []
    for path in sorted({Path(path) for path in outputs} | {Path(path) for path in volatile},
                       key=lambda path: _relative(path, out)):
        is_volatile = path.resolve() in volatile
        entries.append(ManifestEntry(
            path=_relative(path, out),
            digest=None if is_volatile else digest_file(path),
            volatile=is_volatile,
        ))
    return RunManifest(
        command=command,
        config_hash=run_config_hash(config),
        version=langworld.__version__,
        seeds=tuple(seeds),
        inputs={_relative(path, out): digest_file(path) for path in sorted(inputs, key=str)},
        outputs=entries,
    )


def write_manifest(manifest, out):
    path = write_json(Path(out) / MANIFEST, RunManifestSchema().dump(manifest))
    logger.info("manifest: %d outputs in %s", len(manifest.outputs), out)
    return path


def read_manifest(path):
    return RunManifestSchema().load(read_json(path))
