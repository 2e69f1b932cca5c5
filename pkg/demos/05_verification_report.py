# # Verification report
#
# The exact suite replays every per-step and closed-form inequality and
# writes one JSON line per check.

import json
from collections import Counter

from subgradkit import verification

records = verification.exact_suite()
verification.write_report(records, "verify-report.jsonl")

kinds = Counter(r.check_id.split("[")[0] for r in records)
for kind, count in sorted(kinds.items()):
    passed = sum(r.passed for r in records if r.check_id.split("[")[0] == kind)
    print(f"{kind:<24} {passed}/{count}")

# %%
# The tightest check by margin. Runs stopped at a minimizer satisfy the
# theorem's other branch, so they are left out here.

tight = min((r for r in records if "terminated" not in r.note), key=lambda r: r.margin)
print(json.dumps(tight.to_dict(), indent=1))
