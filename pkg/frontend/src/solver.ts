/** Solver session state machine, kept DOM-free so it is unit-testable.
 * One session = one human client with a random per-tab id. */

import { DuplicateAnswerError, HarnessApi } from "./api.js";
import { decodePgm, GrayImage } from "./pgm.js";

export interface CurrentTrial {
  trialId: string;
  image: GrayImage;
}

export interface SubmittedEntry {
  trialId: string;
  text: string;
}

export function randomClientId(): string {
  const rand =
    typeof crypto !== "undefined" && "randomUUID" in crypto
      ? crypto.randomUUID()
      : Math.random().toString(36).slice(2);
  return `human-${rand}`;
}

/** Uppercase as typed; the challenge alphabet is A-Z. */
export function normalizeAnswer(text: string): string {
  return text.toUpperCase();
}

export class SolverSession {
  readonly clientId: string;
  current: CurrentTrial | null = null;
  readonly submitted: SubmittedEntry[] = [];

  constructor(private readonly api: HarnessApi, clientId?: string) {
    this.clientId = clientId ?? randomClientId();
  }

  /** Fetch the next open human trial and its image. Returns null when
   * nothing is open (the caller shows a waiting state and polls). */
  async advance(): Promise<CurrentTrial | null> {
    const seen = new Set(this.submitted.map((s) => s.trialId));
    const open = (await this.api.openTrials("human")).filter((t) => !seen.has(t));
    if (open.length === 0) {
      this.current = null;
      return null;
    }
    const trialId = open[0];
    const image = decodePgm(await this.api.trialImage(trialId));
    this.current = { trialId, image };
    return this.current;
  }

  /** Submit the typed text for the current trial and advance.
   * A duplicate conflict (another client won the slot) skips forward. */
  async submit(text: string): Promise<"accepted" | "duplicate"> {
    if (!this.current) throw new Error("no trial to answer");
    const trialId = this.current.trialId;
    const answer = normalizeAnswer(text);
    try {
      await this.api.submitAnswer(trialId, this.clientId, "human", answer);
    } catch (err) {
      if (err instanceof DuplicateAnswerError) {
        this.current = null;
        return "duplicate";
      }
      throw err;
    }
    this.submitted.push({ trialId, text: answer });
    this.current = null;
    return "accepted";
  }
}
