"""
===============================================================================
MODULE: manifest.py
===============================================================================

PURPOSE:
    Run manifests: the index of everything a command produced. `estimate`
    writes manifest.json, `ee` writes ee_manifest.json; `compare`, `report`
    and `ee` read an estimate manifest to find the per-application results.

LAYOUT OF AN ESTIMATE RUN:
    DIR/manifest.json
    DIR/app1/topology.json
    DIR/app1/trace.csv
    DIR/app1/report_activity.json   DIR/app1/report_activity.csv
    DIR/app1/report_cumulative.json DIR/app1/report_cumulative.csv
    DIR/app1/breakdown.csv
    DIR/app1/samples_sink_0.csv     (--dump-samples)

NOTES:
    - File paths are relative to the manifest's directory
    - Timings are the only values that change between identical runs
    - Files that compare, report and ee write inside DIR are added to
      manifest.json afterwards (register_output)
===============================================================================
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError

from utils.exceptions import ManifestError

PathLike = Union[str, Path]

MANIFEST_NAME = "manifest.json"
EE_MANIFEST_NAME = "ee_manifest.json"


class ApplicationEntry(BaseModel):
    name: str
    label: str = ""
    status: Literal["ok", "failed"] = "ok"
    error: Optional[str] = None
    directory: Optional[str] = None
    bindings: Dict[str, Any] = Field(default_factory=dict)
    simulated_cycles: Optional[int] = None
    activity_weighted_mw: Optional[float] = None
    cumulative_mw: Optional[float] = None
    files: List[str] = Field(default_factory=list)
    timings: Dict[str, float] = Field(default_factory=dict)


class RunManifest(BaseModel):
    command: Literal["estimate", "ee"]
    seed: int
    scenario: Optional[str] = None
    scenario_document: Optional[Dict[str, Any]] = None
    library: Optional[str] = None
    source_manifest: Optional[str] = None
    params: Optional[str] = None
    pt_dbm: Optional[str] = None
    n_samples: Optional[int] = None
    applications: List[ApplicationEntry] = Field(default_factory=list)
    files: List[str] = Field(default_factory=list)
    timings: Dict[str, float] = Field(default_factory=dict)

    @property
    def succeeded(self) -> List[ApplicationEntry]:
        return [entry for entry in self.applications if entry.status == "ok"]

    @property
    def failed(self) -> List[ApplicationEntry]:
        return [entry for entry in self.applications if entry.status == "failed"]

    def add_file(self, relative: str) -> None:
        if relative not in self.files:
            self.files.append(relative)
            self.files.sort()


def write_manifest(manifest: RunManifest, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = manifest.model_dump(mode="json", exclude_none=True)
    path.write_text(json.dumps(document, indent=2) + "\n", encoding="utf-8")
    return path


def load_manifest(path: PathLike) -> RunManifest:
    """
    RAISES:
        ManifestError: file missing, not JSON, or not a run manifest
    """
    path = Path(path)
    try:
        return RunManifest.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except FileNotFoundError as e:
        raise ManifestError(f"Manifest not found: {path}") from e
    except (json.JSONDecodeError, ValidationError) as e:
        raise ManifestError(f"{path}: {e}") from e


def register_output(manifest_path: PathLike, produced: PathLike) -> bool:
    """
    Add a file written after the run to the manifest's file list, when it
    lies inside the manifest's directory.

    RETURNS:
        bool: True if the manifest was updated
    """
    manifest_path = Path(manifest_path)
    try:
        relative = Path(produced).resolve().relative_to(manifest_path.parent.resolve())
    except ValueError:
        return False
    manifest = load_manifest(manifest_path)
    manifest.add_file(relative.as_posix())
    write_manifest(manifest, manifest_path)
    return True
