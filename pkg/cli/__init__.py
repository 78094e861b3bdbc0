# Package marker - command-line front end
from cli.commands import cmd_compare, cmd_ee, cmd_estimate, cmd_report
from cli.manifest import RunManifest, load_manifest

__all__ = ["RunManifest", "cmd_compare", "cmd_ee", "cmd_estimate", "cmd_report", "load_manifest"]
