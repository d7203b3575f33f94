import { afterEach, describe, expect, it, vi } from "vitest";

import { SessionApi, SessionView } from "../src/api.ts";
import { SessionController } from "../src/session.ts";

function view(overrides: Partial<SessionView> = {}): SessionView {
  return {
    id: "abc",
    status: "Running",
    iteration: 0,
    pending_query: { l: 4, k: 5, attributes_l: [1], attributes_k: [2] },
    vertex_count: 4,
    mmr_bound: 7,
    best_base: [1, 2],
    query_count: 0,
    history: [],
    trace: [],
    config: {},
    ...overrides,
  };
}

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.restoreAllMocks();
  vi.unstubAllGlobals();
});

describe("SessionController.submit", () => {
  it("blocks when no query is pending", async () => {
    const controller = new SessionController(new SessionApi(""));
    controller.view = view({ pending_query: null, status: "UniformOptimal" });
    expect(await controller.submit("l")).toBe("blocked");
  });

  it("blocks a second submit while one is in flight", async () => {
    let resolveFetch: (value: Response) => void = () => {};
    const pending = new Promise<Response>((res) => (resolveFetch = res));
    vi.stubGlobal("fetch", vi.fn().mockReturnValue(pending));
    const controller = new SessionController(new SessionApi(""));
    controller.view = view();

    const first = controller.submit("l");
    const second = await controller.submit("k");
    expect(second).toBe("blocked");
    resolveFetch(jsonResponse(view({ iteration: 1, vertex_count: 6 })));
    expect(await first).toBe("applied");
    expect(controller.view?.vertex_count).toBe(6);
    expect(fetch).toHaveBeenCalledTimes(1);
  });

  it("sends the iteration guard with the answer", async () => {
    const mock = vi.fn().mockResolvedValue(jsonResponse(view({ iteration: 1 })));
    vi.stubGlobal("fetch", mock);
    const controller = new SessionController(new SessionApi(""));
    controller.view = view({ iteration: 3 });
    await controller.submit("k");
    const body = JSON.parse(mock.mock.calls[0][1].body as string);
    expect(body).toEqual({ choice: "k", iteration: 3 });
  });

  it("refetches state on 409 instead of double-applying", async () => {
    const conflicted = jsonResponse({ detail: "no pending query" }, 409);
    const fresh = view({ iteration: 5, vertex_count: 9 });
    const mock = vi
      .fn()
      .mockResolvedValueOnce(conflicted)
      .mockResolvedValueOnce(jsonResponse(fresh));
    vi.stubGlobal("fetch", mock);
    const controller = new SessionController(new SessionApi(""));
    controller.view = view();
    expect(await controller.submit("l")).toBe("conflict-refreshed");
    expect(controller.view?.vertex_count).toBe(9);
  });

  it("surfaces network errors without losing the view", async () => {
    vi.stubGlobal("fetch", vi.fn().mockRejectedValue(new Error("offline")));
    const controller = new SessionController(new SessionApi(""));
    const before = view();
    controller.view = before;
    expect(await controller.submit("l")).toBe("error");
    expect(controller.lastError).toContain("offline");
    expect(controller.view).toBe(before);
    expect(controller.inFlight).toBe(false);
  });
});
