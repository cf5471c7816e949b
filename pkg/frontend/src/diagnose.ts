/**
 * The upload-and-diagnose flow: upload the photo, create the job, poll
 * until settled, and shape the result for rendering.
 */

import { DiagnosisShape, GatewayClient, TreatmentShape } from './api.js';
import { OverlayBox, overlayBoxes } from './overlay.js';
import { PollOptions, pollUntilSettled } from './poll.js';

export interface ResultView {
  kind: 'healthy' | 'diseased' | 'failed';
  jobId: string;
  error: string | null;
  boxes: OverlayBox[];
  treatments: TreatmentShape[];
  classificationSlug: string | null;
  diagnosis: DiagnosisShape | null;
}

export interface DiagnoseOptions extends PollOptions {
  taskKind?: 'detection' | 'classification';
  verify?: boolean;
  renderedWidth?: number;
  renderedHeight?: number;
}

export function toResultView(
  jobId: string,
  diagnosis: DiagnosisShape,
  renderedWidth: number,
  renderedHeight: number,
): ResultView {
  const diseaseTreatments = diagnosis.treatments.filter((t) => t.slug !== 'normal');
  const healthy =
    diagnosis.detections.length === 0 &&
    (diagnosis.classification === null || diagnosis.classification.top_slug === 'normal');
  return {
    kind: healthy ? 'healthy' : 'diseased',
    jobId,
    error: null,
    boxes: overlayBoxes(diagnosis.detections, renderedWidth, renderedHeight),
    treatments: healthy ? diagnosis.treatments : diseaseTreatments,
    classificationSlug: diagnosis.classification?.top_slug ?? null,
    diagnosis,
  };
}

export async function uploadAndDiagnose(
  client: GatewayClient,
  file: Blob,
  geo: { lat: number; lon: number } | undefined,
  options: DiagnoseOptions = {},
): Promise<ResultView> {
  const uploadId = await client.uploadImage(file, geo);
  const jobId = await client.createJob(
    uploadId,
    options.taskKind ?? 'detection',
    options.verify ?? true,
  );
  return resumeDiagnosis(client, jobId, options);
}

/** Continue polling an existing job (after a reload or re-login). */
export async function resumeDiagnosis(
  client: GatewayClient,
  jobId: string,
  options: DiagnoseOptions = {},
): Promise<ResultView> {
  const job = await pollUntilSettled(client, jobId, options);
  if (job.status === 'failed') {
    return {
      kind: 'failed',
      jobId,
      error: job.error ?? 'diagnosis failed',
      boxes: [],
      treatments: [],
      classificationSlug: null,
      diagnosis: null,
    };
  }
  const diagnosis = await client.jobResult(jobId);
  return toResultView(
    jobId,
    diagnosis,
    options.renderedWidth ?? 1,
    options.renderedHeight ?? 1,
  );
}
