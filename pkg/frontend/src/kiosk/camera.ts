/** MediaStream-backed camera adapter. Frames are grabbed straight from the
 * video element into a canvas and serialized to JPEG in memory; nothing is
 * written to any client-side storage.
 */

import { CameraAdapter } from "./machine.js";

export class BrowserCamera implements CameraAdapter {
  private stream: MediaStream | null = null;

  constructor(
    private readonly video: HTMLVideoElement,
    private readonly width = 640,
    private readonly height = 480,
  ) {}

  get active(): boolean {
    return this.stream !== null;
  }

  async start(): Promise<void> {
    if (this.stream) return;
    this.stream = await navigator.mediaDevices.getUserMedia({
      video: { width: this.width, height: this.height },
      audio: false,
    });
    this.video.srcObject = this.stream;
    await this.video.play();
  }

  stop(): void {
    if (!this.stream) return;
    for (const track of this.stream.getTracks()) {
      track.stop();
    }
    this.stream = null;
    this.video.srcObject = null;
  }

  async captureFrame(): Promise<ArrayBuffer> {
    if (!this.stream) throw new Error("camera not active");
    const canvas = document.createElement("canvas");
    canvas.width = this.video.videoWidth || this.width;
    canvas.height = this.video.videoHeight || this.height;
    const context = canvas.getContext("2d");
    if (!context) throw new Error("no 2d context");
    context.drawImage(this.video, 0, 0, canvas.width, canvas.height);
    const blob = await new Promise<Blob>((resolve, reject) =>
      canvas.toBlob((b) => (b ? resolve(b) : reject(new Error("frame encode failed"))), "image/jpeg", 0.9),
    );
    return blob.arrayBuffer();
  }
}
