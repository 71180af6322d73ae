import { spawnSync } from "node:child_process";

/**
 * Exit codes of the engine CLI:
 *   0 — everything requested was safe
 *   2 — completed, but something was suppressed/withheld
 *   1 — the request itself failed
 */
export interface EngineResult {
  status: number;
  stdout: string;
  stderr: string;
}

export class EngineError extends Error {}

const DEFAULT_COMMAND = ["python3", "-m", "sdckit"];

/**
 * Thin subprocess client for the engine.  All statistics and all checks
 * happen on the other side of this boundary; the skin never inspects data.
 */
export class EngineClient {
  private command: string[];
  private cwd: string;

  constructor(cwd: string, command?: string[]) {
    this.cwd = cwd;
    if (command) {
      this.command = command;
    } else if (process.env.SDCKIT_CMD) {
      this.command = process.env.SDCKIT_CMD.split(" ");
    } else {
      this.command = DEFAULT_COMMAND;
    }
  }

  /** Run one engine command; throws EngineError when the request fails. */
  run(args: string[]): EngineResult {
    const [exe, ...prefix] = this.command;
    const proc = spawnSync(exe!, [...prefix, ...args], {
      cwd: this.cwd,
      encoding: "utf-8",
    });
    if (proc.error) {
      throw new EngineError(`cannot start engine: ${proc.error.message}`);
    }
    const status = proc.status ?? 1;
    if (status !== 0 && status !== 2) {
      const detail = proc.stderr.trim() || `exit code ${status}`;
      throw new EngineError(detail);
    }
    return { status, stdout: proc.stdout, stderr: proc.stderr };
  }
}
