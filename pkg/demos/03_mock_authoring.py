"""The authoring pipeline end to end, against canned mock replies.

The "repairable" fixtures script a generation agent that emits one broken
call (draw.circle does not exist) and a checker that fixes it, so you can
watch the enhance -> generate -> compile -> check -> compile loop converge
without any network access.
"""

import tempfile
from pathlib import Path

from sonoviz.agents.config import AgentConfig
from sonoviz.agents.pipeline import author
from sonoviz.agents.registry import ScriptRegistry

fixtures = Path(__file__).parent.parent / "fixtures" / "mock_llm" / "repairable"
config = AgentConfig(mode="mock", mock_fixture_dir=str(fixtures))

registry = ScriptRegistry()
with tempfile.TemporaryDirectory() as tmp:
    result = author(
        "a wave",
        registry,
        config,
        registry_path=Path(tmp) / "scripts.json",
        on_status=lambda phase, detail: print(f"  [{phase}] {detail}".rstrip()),
    )

print(f"\noutcome: {result.outcome} after {result.iterations_used} repair iteration(s)")
for entry in result.transcript:
    summary = ", ".join(d.code for d in entry.diagnostics) or "clean"
    print(f"  {entry.agent:<9} -> compile: {summary}")
print(f"\nregistry now holds {len(registry)} record(s); final script:\n")
print(result.source.text)
