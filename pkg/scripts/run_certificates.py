from __future__ import annotations

import time

from icfo.extension.certificate import verify_certificate
from icfo.extension.prism import boundary_prism_cert, horn_prism_cert

MAX_N = 4


def main() -> None:
    print("== prism certificates ==")

    for n in range(1, MAX_N + 1):
        for j in range(n + 1):
            for kind, build in (("boundary", boundary_prism_cert), ("horn", horn_prism_cert)):
                t0 = time.perf_counter()
                cert = build(n, j).certificate
                report = verify_certificate(cert)
                dt = time.perf_counter() - t0
                status = "ok" if report.ok else f"FAILED at step {report.failed_step}: {report.reason}"
                print(f"{kind:8s} n={n} j={j} steps={len(cert):3d} {dt:6.2f}s {status}")


if __name__ == "__main__":
    main()
