/** Canvas view state: pan/zoom plus the screen <-> canvas transform. */

export const MIN_ZOOM = 0.1;
export const MAX_ZOOM = 4.0;

export interface Point {
  x: number;
  y: number;
}

export interface ViewState {
  panX: number;
  panY: number;
  zoom: number;
  selection: string | null;
  pendingStream: string | null;
}

export function initialView(): ViewState {
  return { panX: 0, panY: 0, zoom: 1, selection: null, pendingStream: null };
}

export function clampZoom(zoom: number): number {
  return Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, zoom));
}

export function canvasToScreen(view: ViewState, point: Point): Point {
  return {
    x: (point.x + view.panX) * view.zoom,
    y: (point.y + view.panY) * view.zoom,
  };
}

export function screenToCanvas(view: ViewState, point: Point): Point {
  return {
    x: point.x / view.zoom - view.panX,
    y: point.y / view.zoom - view.panY,
  };
}

export function panBy(view: ViewState, dxScreen: number, dyScreen: number): ViewState {
  return {
    ...view,
    panX: view.panX + dxScreen / view.zoom,
    panY: view.panY + dyScreen / view.zoom,
  };
}

/** Zoom by a factor while keeping the canvas point under `anchor` fixed. */
export function zoomAt(view: ViewState, factor: number, anchor: Point): ViewState {
  const zoom = clampZoom(view.zoom * factor);
  const fixed = screenToCanvas(view, anchor);
  return {
    ...view,
    zoom,
    panX: anchor.x / zoom - fixed.x,
    panY: anchor.y / zoom - fixed.y,
  };
}
