/**
 * Detection overlay geometry and canvas drawing.
 *
 * Boxes arrive normalized (center + extent as fractions); the overlay
 * scales them to the rendered image size, so for any rendered dimensions
 * the drawn corners are exactly the normalized corners times those
 * dimensions.
 */

import { DetectionShape } from './api.js';

export interface OverlayBox {
  x: number;
  y: number;
  width: number;
  height: number;
  label: string;
  confidence: number;
  badge: 'verified' | 'contested' | '';
}

export function overlayBoxes(
  detections: DetectionShape[],
  renderedWidth: number,
  renderedHeight: number,
): OverlayBox[] {
  return detections.map((det) => {
    const x0 = (det.box.cx - det.box.w / 2) * renderedWidth;
    const y0 = (det.box.cy - det.box.h / 2) * renderedHeight;
    return {
      x: x0,
      y: y0,
      width: det.box.w * renderedWidth,
      height: det.box.h * renderedHeight,
      label: det.class_slug,
      confidence: det.confidence,
      badge: det.status === 'verified' || det.status === 'contested' ? det.status : '',
    };
  });
}

const BADGE_COLORS: Record<string, string> = {
  verified: '#2e9e4f',
  contested: '#d97706',
  '': '#00a0c8',
};

export function drawOverlay(
  ctx: CanvasRenderingContext2D,
  detections: DetectionShape[],
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.lineWidth = 2;
  ctx.font = '13px sans-serif';
  for (const box of overlayBoxes(detections, width, height)) {
    ctx.strokeStyle = BADGE_COLORS[box.badge];
    ctx.strokeRect(box.x, box.y, box.width, box.height);
    const tag = `${box.label} ${(box.confidence * 100).toFixed(0)}%${
      box.badge ? ` · ${box.badge}` : ''
    }`;
    const textWidth = ctx.measureText(tag).width;
    ctx.fillStyle = 'rgba(0, 0, 0, 0.65)';
    ctx.fillRect(box.x, Math.max(0, box.y - 18), textWidth + 8, 18);
    ctx.fillStyle = '#ffffff';
    ctx.fillText(tag, box.x + 4, Math.max(12, box.y - 5));
  }
}
