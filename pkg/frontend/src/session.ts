/** Session state holder with a single-in-flight submission guard.
 *
 * The UI is a pure view over the service: every render uses the last
 * snapshot the server returned, and no algorithm state is recomputed
 * client-side.  Double submits are blocked locally while a request is
 * in flight; if the server still reports a conflict (409), the current
 * state is refetched and adopted.
 */

import { ApiError, Choice, SessionApi, SessionView } from "./api.js";

export type SubmitOutcome = "applied" | "blocked" | "conflict-refreshed" | "error";

export class SessionController {
  view: SessionView | null = null;
  inFlight = false;
  lastError: string | null = null;

  constructor(readonly api: SessionApi) {}

  async create(payload: Parameters<SessionApi["createSession"]>[0]): Promise<SessionView> {
    this.view = await this.api.createSession(payload);
    return this.view;
  }

  async load(id: string): Promise<SessionView> {
    this.view = await this.api.getSession(id);
    return this.view;
  }

  get terminal(): boolean {
    return this.view !== null && this.view.status !== "Running";
  }

  /** Submit an answer for the currently pending query. */
  async submit(choice: Choice): Promise<SubmitOutcome> {
    if (this.inFlight || !this.view || !this.view.pending_query) {
      return "blocked";
    }
    this.inFlight = true;
    this.lastError = null;
    try {
      this.view = await this.api.submitAnswer(this.view.id, choice, this.view.iteration);
      return "applied";
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // someone else answered first: adopt the server's state
        this.view = await this.api.getSession(this.view.id);
        return "conflict-refreshed";
      }
      this.lastError = err instanceof Error ? err.message : String(err);
      return "error";
    } finally {
      this.inFlight = false;
    }
  }
}
