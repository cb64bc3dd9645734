/** DOM wiring for the solver page: canvas rendering, input, polling. */

import { HarnessApi } from "./api.js";
import { toRgba } from "./pgm.js";
import { SolverSession, normalizeAnswer } from "./solver.js";

const POLL_MS = 2000;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function startSolverPage(): void {
  const api = new HarnessApi("");
  const session = new SolverSession(api);

  const canvas = el<HTMLCanvasElement>("captcha-canvas");
  const input = el<HTMLInputElement>("answer-input");
  const form = el<HTMLFormElement>("answer-form");
  const status = el<HTMLElement>("status");
  const notice = el<HTMLElement>("notice");
  const history = el<HTMLElement>("history");
  el<HTMLElement>("client-id").textContent = session.clientId;

  let pollTimer: number | null = null;

  function setNotice(text: string): void {
    notice.textContent = text;
    if (text) window.setTimeout(() => (notice.textContent = ""), 4000);
  }

  function renderHistory(): void {
    history.replaceChildren(
      ...session.submitted.map((entry) => {
        const li = document.createElement("li");
        li.textContent = `${entry.trialId}: ${entry.text}`;
        return li;
      }),
    );
  }

  function showWaiting(): void {
    status.textContent = "waiting for open trials...";
    canvas.hidden = true;
    input.disabled = true;
    if (pollTimer === null) {
      pollTimer = window.setInterval(() => void loadNext(), POLL_MS);
    }
  }

  function showTrial(): void {
    if (!session.current) return;
    const img = session.current.image;
    canvas.hidden = false;
    canvas.width = img.width;
    canvas.height = img.height;
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    ctx.putImageData(new ImageData(toRgba(img), img.width, img.height), 0, 0);
    status.textContent = `trial ${session.current.trialId}: type what you read`;
    input.disabled = false;
    input.value = "";
    input.focus();
    if (pollTimer !== null) {
      window.clearInterval(pollTimer);
      pollTimer = null;
    }
  }

  async function loadNext(): Promise<void> {
    try {
      const next = await session.advance();
      if (next) showTrial();
      else showWaiting();
    } catch (err) {
      status.textContent = `network trouble, retrying... (${String(err)})`;
      if (pollTimer === null) {
        pollTimer = window.setInterval(() => void loadNext(), POLL_MS);
      }
    }
  }

  input.addEventListener("input", () => {
    input.value = normalizeAnswer(input.value);
  });

  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    if (!session.current || !input.value) return;
    void session
      .submit(input.value)
      .then((outcome) => {
        if (outcome === "duplicate") {
          setNotice("someone answered that one first; skipping ahead");
        }
        renderHistory();
        return loadNext();
      })
      .catch((err) => setNotice(`submit failed: ${String(err)}`));
  });

  void loadNext();
}

startSolverPage();
