/**
 * Outbreak map layer: query the viewport, shape per-class markers.
 * Panning re-queries; the gateway does the grouping, the client only
 * renders what it returns.
 */

import { GatewayClient, OutbreakGroupShape } from './api.js';

export interface Viewport {
  minLat: number;
  minLon: number;
  maxLat: number;
  maxLon: number;
}

export interface OutbreakMarker {
  slug: string;
  count: number;
  latitude: number;
  longitude: number;
  label: string;
}

export interface OutbreakLayer {
  markers: OutbreakMarker[];
  empty: boolean;
}

export function toMarkers(groups: OutbreakGroupShape[]): OutbreakMarker[] {
  return groups.map((g) => ({
    slug: g.class,
    count: g.count,
    latitude: g.centroid.latitude,
    longitude: g.centroid.longitude,
    label: `${g.class} ×${g.count}`,
  }));
}

export async function loadOutbreakLayer(
  client: GatewayClient,
  viewport: Viewport,
  since = 0,
): Promise<OutbreakLayer> {
  const groups = await client.outbreaks(viewport, since);
  const markers = toMarkers(groups);
  return { markers, empty: markers.length === 0 };
}
