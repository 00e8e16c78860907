/** Kiosk flow controller: drives the four screens from polled station status.
 *
 * All effects go through injected adapters (api, camera, timers), so the
 * whole flow is testable without a browser. Captured frames live only in a
 * local variable on the submit path; nothing is ever written to client-side
 * storage.
 */

import { ApiClient, ApiError, GalleryArtwork, StationStatus } from "../api.js";

export interface CameraAdapter {
  readonly active: boolean;
  start(): Promise<void>;
  stop(): void;
  captureFrame(): Promise<ArrayBuffer>;
}

export type ScreenName =
  | "consent"
  | "gallery"
  | "flash"
  | "countdown"
  | "code"
  | "camera-error"
  | "retry"
  | "error";

export interface KioskView {
  screen: ScreenName;
  galleryEntries: GalleryArtwork[];
  selectedArtwork: GalleryArtwork | null;
  secondsRemaining: number | null;
  cameraActive: boolean;
  codeText: string | null;
  resultImageUrl: string | null;
  banner: string | null;
  retriesUsed: number;
}

export interface KioskOptions {
  api: ApiClient;
  station: string;
  camera: CameraAdapter;
  render: (view: KioskView) => void;
  pollIntervalMs?: number;
  artworkFlashMs?: number;
  setTimeoutImpl?: (fn: () => void, ms: number) => unknown;
}

const DEFAULT_POLL_MS = 500;
const DEFAULT_FLASH_MS = 1500;

export class KioskController {
  private readonly api: ApiClient;
  private readonly station: string;
  private readonly camera: CameraAdapter;
  private readonly renderFn: (view: KioskView) => void;
  private readonly pollIntervalMs: number;
  private readonly artworkFlashMs: number;
  private readonly setTimeoutImpl: (fn: () => void, ms: number) => unknown;

  private gallery: GalleryArtwork[] = [];
  private galleryKey = "";
  private flashing = false;
  private captureInFlight = false;
  private retryPending = false;
  private retriesUsed = 0;
  private banner: string | null = null;
  private stopped = true;
  private lastStatus: StationStatus | null = null;

  constructor(options: KioskOptions) {
    this.api = options.api;
    this.station = options.station;
    this.camera = options.camera;
    this.renderFn = options.render;
    this.pollIntervalMs = options.pollIntervalMs ?? DEFAULT_POLL_MS;
    this.artworkFlashMs = options.artworkFlashMs ?? DEFAULT_FLASH_MS;
    this.setTimeoutImpl = options.setTimeoutImpl ?? ((fn, ms) => setTimeout(fn, ms));
  }

  start(): void {
    this.stopped = false;
    const loop = async () => {
      if (this.stopped) return;
      try {
        await this.tickOnce();
      } finally {
        this.setTimeoutImpl(loop, this.pollIntervalMs);
      }
    };
    void loop();
  }

  stop(): void {
    this.stopped = true;
    this.camera.stop();
  }

  /** One poll cycle: fetch status, settle camera state, auto-capture, render. */
  async tickOnce(): Promise<void> {
    let status: StationStatus;
    try {
      status = await this.api.status(this.station);
    } catch {
      this.banner = "connection lost, retrying";
      this.renderFn(this.viewFor(this.lastStatus));
      return;
    }
    if (this.lastStatus && this.lastStatus.phase !== "consent" && status.phase === "consent") {
      this.resetLocalState();
    }
    this.lastStatus = status;

    if (status.phase === "gallery") {
      await this.ensureGallery(status);
    }
    await this.settleCamera(status);
    if (status.phase === "capturing" && !this.retryPending) {
      await this.submitCapture();
      status = this.lastStatus ?? status;
    }
    this.renderFn(this.viewFor(status));
  }

  private resetLocalState(): void {
    this.flashing = false;
    this.captureInFlight = false;
    this.retryPending = false;
    this.retriesUsed = 0;
    this.banner = null;
  }

  private async ensureGallery(status: StationStatus): Promise<void> {
    const key = status.gallery_order.join(",");
    if (key === this.galleryKey && this.gallery.length) return;
    const response = await this.api.catalog(this.station);
    this.gallery = response.entries;
    this.galleryKey = key;
  }

  /** Camera runs only while the visitor poses: countdown and capture. */
  private async settleCamera(status: StationStatus): Promise<void> {
    if (this.flashing) return; // probed early; countdown follows the flash
    const wantCamera = status.phase === "countdown" || status.phase === "capturing";
    if (wantCamera && !this.camera.active) {
      try {
        await this.camera.start();
      } catch {
        this.banner = "camera unavailable";
      }
    } else if (!wantCamera && this.camera.active) {
      this.camera.stop();
    }
  }

  async onConsentTapped(): Promise<void> {
    try {
      this.lastStatus = await this.api.consent(this.station);
    } catch (error) {
      this.handleFlowError(error);
    }
    this.renderFn(this.viewFor(this.lastStatus));
  }

  /** Select, flash the artwork full-screen briefly, then arm the countdown.
   *
   * The camera is probed before the countdown starts: if permission is
   * denied the session stays in the gallery and an instructional screen
   * is shown instead.
   */
  async onArtworkTapped(artworkId: string): Promise<void> {
    if (this.banner === "camera-permission") {
      this.banner = null;
    }
    try {
      this.lastStatus = await this.api.select(this.station, artworkId);
    } catch (error) {
      this.handleFlowError(error);
      this.renderFn(this.viewFor(this.lastStatus));
      return;
    }
    try {
      await this.camera.start();
    } catch {
      this.camera.stop();
      this.banner = "camera-permission";
      this.renderFn(this.viewFor(this.lastStatus));
      return;
    }
    this.flashing = true;
    this.renderFn(this.viewFor(this.lastStatus));
    await new Promise<void>((resolve) => this.setTimeoutImpl(() => resolve(), this.artworkFlashMs));
    this.flashing = false;
    try {
      this.lastStatus = await this.api.start(this.station);
    } catch (error) {
      this.handleFlowError(error);
    }
    this.renderFn(this.viewFor(this.lastStatus));
  }

  async onRetryTapped(): Promise<void> {
    this.retryPending = false;
    await this.tickOnce();
  }

  /** Grab one frame, hand it to the capture endpoint, and drop it. */
  private async submitCapture(): Promise<void> {
    if (this.captureInFlight) return;
    this.captureInFlight = true;
    try {
      let frame: ArrayBuffer | null = await this.camera.captureFrame();
      try {
        const response = await this.api.capture(this.station, frame);
        this.lastStatus = response.status;
        this.banner = null;
        this.retriesUsed = 0;
      } finally {
        frame = null; // the frame must not outlive the submit path
      }
    } catch (error) {
      if (error instanceof ApiError && error.errorCode === "no_pose_found") {
        this.retriesUsed = Number(error.body.retries_used ?? this.retriesUsed + 1);
        this.retryPending = true;
        this.banner = "no pose detected";
      } else if (error instanceof ApiError && error.status === 409) {
        // Reset race: the session already returned to consent.
        this.resetLocalState();
      } else {
        this.retryPending = true;
        this.banner = "submission failed";
      }
    } finally {
      this.captureInFlight = false;
    }
  }

  private handleFlowError(error: unknown): void {
    if (error instanceof ApiError && error.status === 409) {
      this.banner = null;
      return; // next poll re-syncs the screen with the server phase
    }
    this.banner = "connection lost, retrying";
  }

  private viewFor(status: StationStatus | null): KioskView {
    const base: KioskView = {
      screen: "consent",
      galleryEntries: [],
      selectedArtwork: null,
      secondsRemaining: null,
      cameraActive: this.camera.active,
      codeText: null,
      resultImageUrl: null,
      banner: this.banner,
      retriesUsed: this.retriesUsed,
    };
    if (!status) {
      return { ...base, screen: "error" };
    }
    const selected = this.gallery.find((e) => e.id === status.selected_artwork) ?? null;
    if (this.banner === "camera-permission") {
      return { ...base, screen: "camera-error", galleryEntries: this.gallery };
    }
    if (this.flashing && (status.phase === "gallery" || status.phase === "countdown")) {
      return { ...base, screen: "flash", selectedArtwork: selected };
    }
    switch (status.phase) {
      case "consent":
        return base;
      case "gallery":
        return { ...base, screen: "gallery", galleryEntries: this.gallery };
      case "countdown":
        return {
          ...base,
          screen: this.flashing ? "flash" : "countdown",
          selectedArtwork: selected,
          secondsRemaining: status.seconds_remaining,
        };
      case "capturing":
        return {
          ...base,
          screen: this.retryPending ? "retry" : "countdown",
          selectedArtwork: selected,
          secondsRemaining: 0,
        };
      case "submitted":
        return {
          ...base,
          screen: "code",
          codeText: status.code,
          resultImageUrl: status.result_id ? `/results/${status.result_id}/image.png` : null,
        };
      default:
        return { ...base, screen: "error" };
    }
  }
}
