/** Pan/zoom state for a canvas image. All pixels come straight from the
 * holding institution's image service per Image API URIs; the workbench
 * only computes which URI to show and how to transform it. */

export interface ViewerState {
  serviceBase: string;
  canvasWidth: number;
  canvasHeight: number;
  zoom: number;
  panX: number;
  panY: number;
}

export function openViewer(serviceBase: string, canvasWidth: number, canvasHeight: number): ViewerState {
  return { serviceBase: serviceBase.replace(/\/$/, ''), canvasWidth, canvasHeight, zoom: 1, panX: 0, panY: 0 };
}

export function imageUrl(state: ViewerState, format = 'png'): string {
  return `${state.serviceBase}/full/max/0/default.${format}`;
}

export function zoomBy(state: ViewerState, factor: number): ViewerState {
  const zoom = Math.min(16, Math.max(0.25, state.zoom * factor));
  return { ...state, zoom };
}

export function panBy(state: ViewerState, dx: number, dy: number): ViewerState {
  return { ...state, panX: state.panX + dx, panY: state.panY + dy };
}

/** CSS transform applied to the full-size image element. */
export function cssTransform(state: ViewerState): string {
  return `translate(${state.panX}px, ${state.panY}px) scale(${state.zoom})`;
}

/** Display-space point -> canvas pixel coordinates under the current view. */
export function toCanvasPoint(
  state: ViewerState,
  displayX: number,
  displayY: number,
  renderedWidth: number,
): { x: number; y: number } {
  const scale = (state.canvasWidth / renderedWidth) / state.zoom;
  return {
    x: Math.round((displayX - state.panX) * scale),
    y: Math.round((displayY - state.panY) * scale),
  };
}
