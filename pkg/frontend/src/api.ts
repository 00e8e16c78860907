/** Typed client for the installation's HTTP surface. */

export interface StationStatus {
  phase: string;
  station_id: string;
  booth: string;
  gallery_order: string[];
  selected_artwork: string | null;
  seconds_remaining: number | null;
  camera_active: boolean;
  code: string | null;
  result_id: string | null;
  error_banner: string | null;
  pose_retries: number;
}

export interface GalleryArtwork {
  id: string;
  title: string;
  artist: string;
  collection: string;
  subject_count: number;
  dynamism: string;
  image_url: string;
}

export interface CatalogResponse {
  station_id: string;
  entries: GalleryArtwork[];
}

export interface CaptureResponse {
  code: string;
  job_id: string;
  status: StationStatus;
}

export interface FeedEntry {
  result_id: string;
  created_at: number;
  booth: string;
  artwork_id: string;
  image_url: string;
  pose_url: string;
  code_hash: string;
}

export interface FeedPage {
  entries: FeedEntry[];
  new_count: number;
  next_cursor: number;
  resync: boolean;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: Record<string, unknown>,
  ) {
    super(`api error ${status}: ${JSON.stringify(body)}`);
  }

  get errorCode(): string {
    return typeof this.body.error === "string" ? this.body.error : "unknown";
  }
}

async function parseJson(response: Response): Promise<Record<string, unknown>> {
  try {
    return (await response.json()) as Record<string, unknown>;
  } catch {
    return {};
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await parseJson(response);
    if (!response.ok) {
      throw new ApiError(response.status, body);
    }
    return body as T;
  }

  consent(station: string): Promise<StationStatus> {
    return this.request(`/station/${station}/consent`, { method: "POST" });
  }

  catalog(station: string): Promise<CatalogResponse> {
    return this.request(`/station/${station}/catalog`);
  }

  select(station: string, artworkId: string): Promise<StationStatus> {
    return this.request(`/station/${station}/select`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ artwork_id: artworkId }),
    });
  }

  start(station: string): Promise<StationStatus> {
    return this.request(`/station/${station}/start`, { method: "POST" });
  }

  capture(station: string, frame: ArrayBuffer): Promise<CaptureResponse> {
    return this.request(`/station/${station}/capture`, {
      method: "POST",
      headers: { "Content-Type": "application/octet-stream" },
      body: frame,
    });
  }

  status(station: string): Promise<StationStatus> {
    return this.request(`/station/${station}/status`);
  }

  feed(cursor: number | null, booth: string | null, timeoutS: number): Promise<FeedPage> {
    const params = new URLSearchParams();
    if (cursor !== null) params.set("cursor", String(cursor));
    if (booth) params.set("booth", booth);
    params.set("timeout", String(timeoutS));
    return this.request(`/feed?${params.toString()}`);
  }

  async posePayload(poseUrl: string): Promise<Record<string, unknown>> {
    return this.request(poseUrl);
  }
}
