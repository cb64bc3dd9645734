/** Typed client for the harness HTTP API. All numbers shown in the UI come
 * from these responses; the client never rescores anything. */

export type Role = "human" | "machine";

export interface PerTrialRow {
  trial_id: string;
  machine_rate: number;
  human_rate: number;
  verdict: "human" | "machine" | "indistinguishable";
}

export interface ReportPayload {
  n_trials: number;
  machine_char_rate?: number;
  human_char_rate?: number;
  machine_full_rate?: number;
  human_full_rate?: number;
  per_trial: PerTrialRow[];
}

export interface TrialDetail {
  trial_id: string;
  status: "open" | "closed";
  created_at: number;
  truth?: string;
  verdict?: string;
  answers?: { client_id: string; role: Role; text: string; rate: number }[];
}

export class DuplicateAnswerError extends Error {}
export class UnknownTrialError extends Error {}

export class HarnessApi {
  constructor(private readonly baseUrl: string = "") {}

  private url(path: string): string {
    return this.baseUrl + path;
  }

  async openTrials(role: Role): Promise<string[]> {
    const resp = await fetch(this.url(`/api/trials/open?role=${role}`));
    if (!resp.ok) throw new Error(`open-trials listing failed: ${resp.status}`);
    const body = (await resp.json()) as { trial_ids: string[] };
    return body.trial_ids;
  }

  async trialImage(trialId: string): Promise<Uint8Array> {
    const resp = await fetch(this.url(`/api/trials/${trialId}/image`));
    if (!resp.ok) throw new Error(`image fetch failed: ${resp.status}`);
    return new Uint8Array(await resp.arrayBuffer());
  }

  async trialDetail(trialId: string): Promise<TrialDetail> {
    const resp = await fetch(this.url(`/api/trials/${trialId}`));
    if (!resp.ok) throw new Error(`trial detail failed: ${resp.status}`);
    return (await resp.json()) as TrialDetail;
  }

  async submitAnswer(trialId: string, clientId: string, role: Role,
                     text: string): Promise<void> {
    const resp = await fetch(this.url(`/api/trials/${trialId}/answers`), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ client_id: clientId, role, text }),
    });
    if (resp.status === 409) throw new DuplicateAnswerError(await resp.text());
    if (resp.status === 404) throw new UnknownTrialError(trialId);
    if (!resp.ok) throw new Error(`submit failed: ${resp.status}`);
    const body = (await resp.json()) as { accepted?: boolean };
    if (body.accepted !== true) throw new Error("server did not accept the answer");
  }

  async report(): Promise<ReportPayload> {
    const resp = await fetch(this.url("/api/report"));
    if (!resp.ok) throw new Error(`report fetch failed: ${resp.status}`);
    return (await resp.json()) as ReportPayload;
  }
}
