# Copyright 2025 Cisco Systems, Inc. and its affiliates
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# SPDX-License-Identifier: Apache-2.0

import asyncio
import logging
from contextlib import asynccontextmanager
from typing import AsyncGenerator, Optional

import uvicorn
from fastapi import FastAPI
from fastapi.routing import APIRoute
from starlette.middleware.base import BaseHTTPMiddleware
from starlette.middleware.cors import CORSMiddleware
from starlette.requests import Request

from app.api.routes import analysis, stateless_runs
from app.core.config import APISettings, LabSettings, load_and_validate_lab_settings, parse_cors
from app.core.logging_config import configure_logging
from app.core.utils import code_version, load_environment_variables

logger = logging.getLogger(__name__)


class Log422Middleware(BaseHTTPMiddleware):
    async def dispatch(self, request: Request, call_next):
        response = await call_next(request)
        if response.status_code == 422:
            try:
                body = await request.json()
            except Exception:
                body = "Unable to parse body"

            log_data = {
                "url": str(request.url),
                "method": request.method,
                "query_params": dict(request.query_params),
                "body": body,
            }
            logger.error(f"422 Validation Error: {log_data}")
        return response


@asynccontextmanager
async def lifespan(app: FastAPI) -> AsyncGenerator[None, None]:
    """
    Defines startup and shutdown logic for the FastAPI application.

    Args:
        app (FastAPI): The FastAPI application instance.

    Yields:
        None: The application runs while `yield` is active.
    """
    logger.info("Starting Stochastic Shear Lab service")
    yield
    logger.info("Application shutdown")


def custom_generate_unique_id(route: APIRoute) -> str:
    """
    Generates a unique identifier for API routes: `{tag}-{route_name}`, or
    the route name when untagged.
    """
    if route.tags:
        return f"{route.tags[0]}-{route.name}"
    return route.name


def add_handlers(app: FastAPI) -> None:
    """
    Adds global route handlers to the FastAPI application.

    Args:
        app (FastAPI): The FastAPI application instance.
    """

    @app.get(
        "/",
        summary="Root endpoint",
        description="Returns a welcome message for the API.",
        tags=["General"],
    )
    async def root() -> dict:
        return {"message": "Stochastic Shear Lab", "version": code_version()}


def create_app(settings: APISettings, lab_settings: Optional[LabSettings] = None) -> FastAPI:
    """
    Creates and configures the FastAPI application instance.

    This function sets up:
    - The API metadata (title, version, OpenAPI URL).
    - CORS middleware.
    - Route handlers for the analysis and run endpoints.
    - The laboratory settings on ``app.state.settings``.

    Args:
        settings (APISettings): Service settings.
        lab_settings (LabSettings, optional): Laboratory settings; loaded
            and validated from the environment when omitted.

    Returns:
        FastAPI: The configured FastAPI application instance.
    """
    app = FastAPI(
        title=settings.PROJECT_NAME,
        openapi_url=f"{settings.API_V1_STR}/openapi.json",
        generate_unique_id_function=custom_generate_unique_id,
        version=code_version(),
        description=settings.DESCRIPTION,
        lifespan=lifespan,
    )
    add_handlers(app)
    app.include_router(analysis.router, prefix=settings.API_V1_STR)
    app.include_router(stateless_runs.router, prefix=settings.API_V1_STR)

    app.add_middleware(
        CORSMiddleware,
        allow_origins=parse_cors(settings.CORS_ORIGINS),
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.add_middleware(Log422Middleware)

    if lab_settings is None:
        try:
            lab_settings = load_and_validate_lab_settings()
        except ValueError as e:
            logger.error(f"Startup failed: {e}")
            raise SystemExit(1) from e
    app.state.settings = lab_settings

    return app


async def serve_rest(app: FastAPI, settings: APISettings):
    """
    Starts the Uvicorn server to serve the FastAPI application.
    """
    config = uvicorn.Config(
        app,
        host=settings.SHEARLAB_HOST,
        port=settings.SHEARLAB_PORT,
        log_level="info",
    )
    server = uvicorn.Server(config)
    await server.serve()


async def main() -> None:
    """
    Entry point for running the service: logging, `.env`, settings, then
    Uvicorn.
    """
    configure_logging()
    load_environment_variables()
    settings = APISettings()
    logger.info("Starting REST server.")
    app = create_app(settings)
    await serve_rest(app, settings)


if __name__ == "__main__":
    asyncio.run(main())
