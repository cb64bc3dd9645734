import { afterEach, describe, expect, it, vi } from "vitest";

import { HarnessApi } from "../src/api";
import { SolverSession, normalizeAnswer, randomClientId } from "../src/solver";

const PGM_1x1 = (() => {
  const head = new TextEncoder().encode("P5\n1 1\n255\n");
  const out = new Uint8Array(head.length + 1);
  out.set(head);
  out[head.length] = 42;
  return out;
})();

interface Route {
  status: number;
  body: unknown;
  binary?: Uint8Array;
}

/** fetch stub keyed on "METHOD path"; records submissions. */
function fakeFetch(routes: Map<string, Route>, submissions: unknown[]) {
  return vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = new URL(String(input));
    const key = `${init?.method ?? "GET"} ${url.pathname}${url.search}`;
    const route = routes.get(key);
    if (!route) return new Response("{}", { status: 404 });
    if (init?.body) submissions.push(JSON.parse(String(init.body)));
    if (route.binary) return new Response(route.binary, { status: route.status });
    return new Response(JSON.stringify(route.body), { status: route.status });
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("normalizeAnswer", () => {
  it("uppercases as typed", () => {
    expect(normalizeAnswer("cYmW")).toBe("CYMW");
  });
});

describe("randomClientId", () => {
  it("differs per session", () => {
    expect(randomClientId()).not.toBe(randomClientId());
  });
});

describe("SolverSession", () => {
  it("advances to the first unanswered open trial and decodes its image", async () => {
    const routes = new Map<string, Route>([
      ["GET /api/trials/open?role=human",
       { status: 200, body: { trial_ids: ["t00001", "t00002"] } }],
      ["GET /api/trials/t00001/image", { status: 200, body: null, binary: PGM_1x1 }],
    ]);
    vi.stubGlobal("fetch", fakeFetch(routes, []));
    const session = new SolverSession(new HarnessApi("http://h"), "human-test");
    const current = await session.advance();
    expect(current?.trialId).toBe("t00001");
    expect(current?.image.pixels[0]).toBe(42);
  });

  it("submits the human role with the session client id and records history", async () => {
    const submissions: any[] = [];
    const routes = new Map<string, Route>([
      ["GET /api/trials/open?role=human",
       { status: 200, body: { trial_ids: ["t00009"] } }],
      ["GET /api/trials/t00009/image", { status: 200, body: null, binary: PGM_1x1 }],
      ["POST /api/trials/t00009/answers", { status: 200, body: { accepted: true } }],
    ]);
    vi.stubGlobal("fetch", fakeFetch(routes, submissions));
    const session = new SolverSession(new HarnessApi("http://h"), "human-test");
    await session.advance();
    const outcome = await session.submit("cymw");
    expect(outcome).toBe("accepted");
    expect(submissions[0]).toEqual(
      { client_id: "human-test", role: "human", text: "CYMW" });
    expect(session.submitted).toEqual([{ trialId: "t00009", text: "CYMW" }]);
    expect(session.current).toBeNull();
  });

  it("waits when nothing is open", async () => {
    const routes = new Map<string, Route>([
      ["GET /api/trials/open?role=human", { status: 200, body: { trial_ids: [] } }],
    ]);
    vi.stubGlobal("fetch", fakeFetch(routes, []));
    const session = new SolverSession(new HarnessApi("http://h"), "human-test");
    expect(await session.advance()).toBeNull();
  });

  it("treats 409 as a non-fatal skip", async () => {
    const routes = new Map<string, Route>([
      ["GET /api/trials/open?role=human",
       { status: 200, body: { trial_ids: ["t00003"] } }],
      ["GET /api/trials/t00003/image", { status: 200, body: null, binary: PGM_1x1 }],
      ["POST /api/trials/t00003/answers",
       { status: 409, body: { error: "already answered" } }],
    ]);
    vi.stubGlobal("fetch", fakeFetch(routes, []));
    const session = new SolverSession(new HarnessApi("http://h"), "human-test");
    await session.advance();
    expect(await session.submit("ABCD")).toBe("duplicate");
    expect(session.submitted).toEqual([]);
  });

  it("ten sequential solves leave ten history entries with no repeats", async () => {
    const ids = Array.from({ length: 10 }, (_, i) => `t${String(i + 1).padStart(5, "0")}`);
    const routes = new Map<string, Route>([
      ["GET /api/trials/open?role=human", { status: 200, body: { trial_ids: ids } }],
    ]);
    for (const id of ids) {
      routes.set(`GET /api/trials/${id}/image`,
                 { status: 200, body: null, binary: PGM_1x1 });
      routes.set(`POST /api/trials/${id}/answers`,
                 { status: 200, body: { accepted: true } });
    }
    vi.stubGlobal("fetch", fakeFetch(routes, []));
    const session = new SolverSession(new HarnessApi("http://h"), "human-test");
    for (let i = 0; i < 10; i++) {
      expect(await session.advance()).not.toBeNull();
      expect(await session.submit("ABCD")).toBe("accepted");
    }
    expect(session.submitted).toHaveLength(10);
    const answered = session.submitted.map((s) => s.trialId);
    expect(new Set(answered).size).toBe(10);
    expect(await session.advance()).toBeNull();
  });

  it("never refetches a trial it already answered", async () => {
    const submissions: any[] = [];
    const routes = new Map<string, Route>([
      ["GET /api/trials/open?role=human",
       { status: 200, body: { trial_ids: ["t00004"] } }],
      ["GET /api/trials/t00004/image", { status: 200, body: null, binary: PGM_1x1 }],
      ["POST /api/trials/t00004/answers", { status: 200, body: { accepted: true } }],
    ]);
    vi.stubGlobal("fetch", fakeFetch(routes, submissions));
    const session = new SolverSession(new HarnessApi("http://h"), "human-test");
    await session.advance();
    await session.submit("AAAA");
    // The server would still list it until the machine answers; the session skips it.
    expect(await session.advance()).toBeNull();
  });
});
