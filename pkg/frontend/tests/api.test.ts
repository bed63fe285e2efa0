import { describe, expect, it } from "vitest";

import { ApiClient, FetchLike, PredictResponse } from "../src/api.js";
import { DrawingPoint } from "../src/geometry.js";

const POINT: DrawingPoint = { side: "front", x: 0.5, y: 0.5 };

const okResponse = (body: unknown) =>
  Promise.resolve({ ok: true, status: 200, json: () => Promise.resolve(body) });

const errResponse = (status: number, body: unknown) =>
  Promise.resolve({ ok: false, status, json: () => Promise.resolve(body) });

function deferred<T>() {
  let resolve!: (v: T) => void;
  const promise = new Promise<T>((r) => (resolve = r));
  return { promise, resolve };
}

const FAKE_PREDICT: PredictResponse = {
  regions: 2,
  views: [
    { name: "symptom", n: 1, labels: [{ label: "L ache", score: 0.4 }] },
    { name: "reason", n: 1, labels: [{ label: "R strain", score: 0.3 }] },
  ],
  model: {
    n_topics: 4,
    private_topics: [1, 1, 1],
    view_names: ["drawing", "symptom", "reason"],
    vocab_sizes: [16, 8, 8],
    seed: 0,
  },
};

describe("ApiClient.fetchModel", () => {
  it("returns the parsed metadata", async () => {
    const client = new ApiClient((() => okResponse(FAKE_PREDICT.model)) as FetchLike);
    const info = await client.fetchModel();
    expect(info.view_names).toEqual(["drawing", "symptom", "reason"]);
  });

  it("throws the service detail on failure", async () => {
    const client = new ApiClient(
      (() => errResponse(500, { detail: "model not loaded" })) as FetchLike,
    );
    await expect(client.fetchModel()).rejects.toThrow("model not loaded");
  });
});

describe("ApiClient.predict", () => {
  it("posts the points and returns the parsed result", async () => {
    const calls: Array<{ url: string; body: string }> = [];
    const client = new ApiClient(((url: string, init?: { body?: string }) => {
      calls.push({ url, body: init?.body ?? "" });
      return okResponse(FAKE_PREDICT);
    }) as FetchLike);
    const outcome = await client.predict([POINT]);
    expect(outcome).toEqual({ kind: "ok", response: FAKE_PREDICT });
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("/api/predict");
    expect(JSON.parse(calls[0].body)).toEqual({ points: [POINT] });
  });

  it("surfaces the service's validation detail", async () => {
    const client = new ApiClient(
      (() => errResponse(422, { detail: "no painted points" })) as FetchLike,
    );
    const outcome = await client.predict([]);
    expect(outcome).toEqual({ kind: "error", message: "no painted points" });
  });

  it("falls back to the status code when the body is not JSON", async () => {
    const client = new ApiClient(
      (() =>
        Promise.resolve({
          ok: false,
          status: 502,
          json: () => Promise.reject(new Error("not json")),
        })) as FetchLike,
    );
    const outcome = await client.predict([POINT]);
    expect(outcome).toEqual({ kind: "error", message: "request failed with status 502" });
  });

  it("reports a network failure as an error outcome", async () => {
    const client = new ApiClient((() => Promise.reject(new Error("offline"))) as FetchLike);
    const outcome = await client.predict([POINT]);
    expect(outcome).toEqual({ kind: "error", message: "offline" });
  });

  it("marks an overtaken request stale and lets the newest win", async () => {
    const first = deferred<{ ok: boolean; status: number; json(): Promise<unknown> }>();
    let call = 0;
    const client = new ApiClient(((_url: string) => {
      call += 1;
      if (call === 1) return first.promise;
      return okResponse(FAKE_PREDICT);
    }) as FetchLike);

    const p1 = client.predict([POINT]);
    const p2 = client.predict([POINT, POINT]);
    const second = await p2;
    expect(second.kind).toBe("ok");

    // the slow first response arrives after the second finished
    first.resolve({ ok: true, status: 200, json: () => Promise.resolve(FAKE_PREDICT) });
    const firstOutcome = await p1;
    expect(firstOutcome).toEqual({ kind: "stale" });
  });

  it("suppresses errors from stale requests", async () => {
    const first = deferred<never>();
    let call = 0;
    const client = new ApiClient(((_url: string) => {
      call += 1;
      if (call === 1) return first.promise;
      return okResponse(FAKE_PREDICT);
    }) as FetchLike);

    const p1 = client.predict([POINT]);
    await client.predict([POINT]);
    // fail the stale request only after it was overtaken
    queueMicrotask(() => first.resolve(Promise.reject(new Error("boom")) as never));
    const outcome = await p1;
    expect(outcome).toEqual({ kind: "stale" });
  });
});
